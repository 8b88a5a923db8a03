# %% [markdown]
# # Monomial graphs and digraphs
#
# B(q; m, n) joins point (p1, p2) to line [l1, l2] when p2 + l2 = p1^m l1^n.
# Whether two of these graphs are isomorphic depends only on gcd data of the exponents.
# This notebook checks that rule against a direct isomorphism test for q = 5.

# %%
import itertools

from agdg.constructions import build_catalog
from agdg.graphcore import is_isomorphic, to_explicit
from agdg.monodigraph import gcd_multiset, monomial_iso_predicted

# %%
q = 5
pairs = [(m, n) for m in range(1, q) for n in range(1, q)]
graphs = {mn: to_explicit(build_catalog("B", {"q": q, "m": mn[0], "n": mn[1]}).graph)[0] for mn in pairs}
mismatch = [
    (a, b) for a, b in itertools.combinations(pairs, 2)
    if is_isomorphic(graphs[a], graphs[b]) != monomial_iso_predicted(q, *a, *b)
]
print("pairs:", len(pairs) * (len(pairs) - 1) // 2, "mismatches:", len(mismatch))

# %% [markdown]
# Isomorphism classes, grouped by their gcd signature:

# %%
classes = {}
for mn in pairs:
    classes.setdefault(gcd_multiset(q, *mn), []).append(mn)
for key, members in sorted(classes.items()):
    print(key, members)

# %% [markdown]
# ## The directed version
# In D(q; m, n) there is an arc a -> b when a2 + b2 = a1^m b1^n. The digraph has loops, so
# the census of short directed cycles treats a loop as a cycle of length 1.

# %%
from agdg.monodigraph import build_digraph, digraph_diameter, strong_components, subdigraph_census

for m, n in [(1, 1), (1, 2), (2, 2)]:
    D = build_digraph(3, m, n)
    print((m, n), strong_components(D)["count"], digraph_diameter(D), subdigraph_census(D, 5))
