# %% [markdown]
# # Sequence benchmark
#
# Build a CIF stand-in sequence (a camera pan over a natural photograph,
# with sensor noise and an occasional flash), write it as raw I420, and
# compare zero-motion copy, boundary-matching temporal concealment and the
# refined variant under the checkerboard loss pattern.
#
# Pass a real CIF file instead with:  python 03_sequence_benchmark.py foreman_cif.yuv

# %%
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from dter import VideoSequence
from dter.cli import RunConfig, run_compare
from dter.synthetic import panning_sequence, smooth_field

FRAMES = int(sys.argv[2]) if len(sys.argv) > 2 else 12


def natural_canvas():
    try:
        from skimage import data
        from skimage.color import rgb2gray
        from skimage.transform import resize
    except ImportError:
        return smooth_field(420, 520, sigma=3.0, seed=1).astype(float)
    img = rgb2gray(data.astronaut()) * 255
    return resize(img, (420, 520), anti_aliasing=True)


def write_i420(seq: VideoSequence, path: Path):
    chroma = bytes([128]) * (seq.width * seq.height // 2)
    with open(path, "wb") as fh:
        for f in seq:
            fh.write(f.to_bytes() + chroma)


# %%
if len(sys.argv) > 1:
    src = Path(sys.argv[1])
else:
    src = Path(tempfile.mkdtemp()) / "pan_cif.yuv"
    seq = panning_sequence(natural_canvas(), 288, 352, FRAMES, velocity=(1.5, 0.7),
                           flicker=6, noise=2.0)
    write_i420(seq, src)

# %%
cfgs = [RunConfig(src, 352, 288, FRAMES, algorithm=a) for a in ("copy", "dmve", "dter")]
t0 = time.perf_counter()
rows = run_compare(cfgs, baseline="dmve")
print(f"{'sequence':>10} {'algorithm':>9} {'PSNR':>8} {'gain':>7}")
for r in rows:
    print(f"{r['sequence']:>10} {r['algorithm']:>9} {r['psnr_db'][:6]:>8} {float(r['gain_db']):+7.2f}")
print(f"{time.perf_counter() - t0:.0f} s for {FRAMES} frames x 3 algorithms")
