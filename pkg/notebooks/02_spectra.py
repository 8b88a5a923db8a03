# %% [markdown]
# # Spectra of Wenger graphs
#
# The Wenger graph W_m(q) has a spectrum in closed form. Here we compare that
# closed form with a direct eigenvalue computation on small cases.

# %%
import numpy as np

from agdg import spectra
from agdg.constructions import build_catalog
from agdg.graphcore import numeric_spectrum

# %%
for m, q in [(1, 3), (2, 3), (1, 5)]:
    closed = spectra.wenger_spectrum_closed(m, q)
    G = build_catalog("W", {"m": m, "q": q}).graph
    num = numeric_spectrum(G)
    print(f"W_{m}({q}): total {closed.total}, deviation {closed.compare(num):.1e}")

# %% [markdown]
# The second largest eigenvalue sets the spectral gap. Below it is printed next to
# 2 sqrt(q-1), the Ramanujan bound for a q-regular graph.

# %%
for q in (3, 4, 5, 7):
    ev = np.sort(numeric_spectrum(build_catalog("W", {"m": 1, "q": q}).graph))[::-1]
    print(q, round(float(ev[1]), 4), round(2 * np.sqrt(q - 1), 4))
