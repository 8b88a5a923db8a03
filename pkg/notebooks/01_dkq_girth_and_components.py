# %% [markdown]
# # Girth and components of D(k,q)
#
# D(k,q) is the bipartite incidence graph whose points and lines are vectors in GF(q)^k.
# Its edges come from a triangular system of bilinear equations.
# This notebook builds a few small members of the family.
# It then measures girth, counts components and checks the invariant vectors against BFS.

# %%
import numpy as np

from agdg import dkq
from agdg.graphcore import components, girth

# %% [markdown]
# ## Girth as k grows
# Computing girth over vertex orbits keeps each BFS cheap. Every vertex of D(k,q) lies in a
# single transitive class on each side.

# %%
for q in (3, 4, 5):
    row = [girth(dkq.d_graph(k, q), use_orbits=True) for k in range(2, 8)]
    print(f"q={q}: {row}")

# %% [markdown]
# ## Components
# Once k reaches 6 the graph stops being connected. The invariant vector is constant along
# edges, so it labels each component.

# %%
G = dkq.d_graph(6, 3)
C = components(G)
inv = dkq.invariants(G, C.codes)
print("components:", C.count, "sizes:", sorted(set(C.sizes)))
print("distinct invariant vectors:", len({tuple(r) for r in inv.tolist()}))

# %% [markdown]
# ## One component, CD(k,q)
# `cd_component` builds the component that contains the zero point.

# %%
from agdg.graphcore import diameter_of_component

for k in range(2, 7):
    H = dkq.cd_component(k, 3)
    print(k, H.num_vertices(), diameter_of_component(H, 0, use_orbits=True))
