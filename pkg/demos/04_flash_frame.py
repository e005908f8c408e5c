# %% [markdown]
# # A flash between two frames
#
# When the illumination jumps from one frame to the next, every temporally
# copied block comes out too dark. Motion vectors are still right, so the
# problem is invisible to boundary matching alone, but the test-area error
# catches it and switches the refinement on.

# %%
import numpy as np

from dter import Frame, apply_loss, checkerboard_pattern, conceal_frame, psnr_frame
from dter.synthetic import smooth_field, static_sequence

cur = smooth_field(288, 352, sigma=4.0, seed=0)
lost = checkerboard_pattern(352, 288, 2)[1]
damaged = Frame(apply_loss(static_sequence(cur, 2), [lost])[1].samples)

# %%
for jump in (0, 5, 10, 20):
    ref = Frame(np.clip(cur.astype(int) - jump, 0, 255))
    dmve, _ = conceal_frame(damaged, ref, lost, "dmve")
    dter, diags = conceal_frame(damaged, ref, lost, "dter")
    mean_h = np.mean([d.h for d in diags])
    print(f"jump {jump:2d}: mean h {mean_h:5.2f}   PSNR dmve {psnr_frame(Frame(cur), dmve):6.2f}"
          f"   dter {psnr_frame(Frame(cur), dter):6.2f}")
