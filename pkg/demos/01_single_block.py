# %% [markdown]
# # Concealing one lost block
#
# A single 16x16 block is lost in frame t. We estimate it from frame t-1 with
# boundary matching, measure how well that motion vector explains the
# received ring around the block, and let the NLM refinement pull the
# estimate toward its spatial surroundings when the match is poor.

# %%
import numpy as np

from dter import (
    BlockLoc, Frame, LossMap, ProcessingArea, RefinementParams, SearchParams,
    adaptive_h, build_test_area, dmve_search, extrapolate_block, refine_block, temporal_error,
)
from dter.synthetic import smooth_field

# %% [markdown]
# The scene: a smooth random texture. The previous frame is the same
# texture, 10 levels darker, as when a flash lights up the current frame.

# %%
cur = smooth_field(96, 96, sigma=4.0, seed=0)
ref = Frame(cur.astype(int) - 10)
block = BlockLoc(48, 32)
lost = LossMap(1, frozenset({block}))

damaged = cur.copy()
damaged[block.slices] = 0
damaged = Frame(damaged)

# %% [markdown]
# ## Temporal estimate

# %%
mv = dmve_search(damaged, ref, block, lost, SearchParams(search_range=16))
estimate = extrapolate_block(ref, block, mv)
print("motion vector:", (mv.vx, mv.vy), "band cost:", round(mv.cost, 2))

orig = cur[block.slices].astype(float)
print("temporal estimate MSE:", ((estimate - orig) ** 2).mean())

# %% [markdown]
# ## How trustworthy is it?
#
# The test area is the received 8-sample ring around the block. Its RMS
# error under the same motion vector drives the averaging strength h.

# %%
area = build_test_area(block, lost, 96, 96, d_width=8)
e_d = temporal_error(damaged, ref, area, mv)
rp = RefinementParams(d_m=6, eta=5, a=12)
h = adaptive_h(e_d, rp.eta)
print(f"test area: {len(area)} samples, e_D = {e_d:.2f}, h = {h:.2f}")

# %% [markdown]
# ## Spatial refinement
#
# The 40x40 window holds the received border (A) and the estimate (B).
# Refined samples are written back immediately, outer ring first.

# %%
window = ProcessingArea.from_frame(damaged, ~lost.mask(96, 96), block, estimate, rp.a)
refined = refine_block(window, rp, h).block_samples()
print("refined MSE:", ((refined - orig) ** 2).mean())
print("mean level  original %.1f  temporal %.1f  refined %.1f"
      % (orig.mean(), estimate.mean(), refined.mean()))
