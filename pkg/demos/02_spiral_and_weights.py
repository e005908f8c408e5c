# %% [markdown]
# # Scan order and patch weights
#
# Samples of the lost block are refined one at a time. The scan runs
# clockwise from the top-left corner, ring by ring toward the centre, so
# samples near the received border are refined first and feed the inner ones.

# %%
import numpy as np

from dter import BlockLoc, ProcessingArea, neighborhood_distance, nlm_weight, spiral_order
from dter.synthetic import smooth_field

# %%
rank = np.zeros((6, 8), int)
for i, (c, r) in enumerate(spiral_order(BlockLoc(0, 0, 8, 6))):
    rank[r, c] = i
print(rank)

# %% [markdown]
# ## Which samples get a say?
#
# For one sample at the block corner, every sample of the window gets a
# weight exp(-d / h^2), where d is the mean squared difference between the
# two surrounding 13x13 patches. Similar patches dominate the average.

# %%
plane = smooth_field(64, 64, sigma=3.0, seed=4)
block = BlockLoc(24, 24)
estimate = plane[block.slices].astype(int) + 12
area = ProcessingArea.from_frame(plane, np.ones(plane.shape, bool), block, estimate, border=12)

p = (area.b_rect.x0, area.b_rect.y0)
h = 7.0
weights = np.zeros(area.s.shape)
for r in range(area.s.shape[0]):
    for c in range(area.s.shape[1]):
        weights[r, c] = nlm_weight(neighborhood_distance(area, p, (c, r), 6), h)

print("self weight:", weights[p[1], p[0]])
print("share of weight mass inside the block: %.2f"
      % (weights[area.b_rect.slices].sum() / weights.sum()))
top = np.dstack(np.unravel_index(np.argsort(weights, axis=None)[::-1][:5], weights.shape))[0]
print("five heaviest (row, col):", top.tolist())

# %%
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(1, 2, figsize=(8, 4))
    ax[0].imshow(area.s, cmap="gray")
    ax[0].set_title("processing window")
    ax[1].imshow(weights, cmap="magma")
    ax[1].plot(*p, "c+")
    ax[1].set_title("weights for the corner sample")
    fig.savefig("weights.png", dpi=100)
    print("wrote weights.png")
except ImportError:
    pass
