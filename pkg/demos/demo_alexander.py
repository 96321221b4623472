"""Alexander polynomials by Fox calculus, from presentations and braid closures."""

from bitorsion import KnotPresentation, fox_alexander, knot_from_braid

print("=" * 70)
print("Fox calculus on Wirtinger presentations")
print("=" * 70)

trefoil = KnotPresentation(("a", "b", "c"), ("a b A C", "b c B A"))
print(f"  trefoil (hand Wirtinger):   {fox_alexander(trefoil)}")
print(f"  unknot:                     {fox_alexander(KnotPresentation(('a',), ()))}")

print()
print("From braid closures (generators = diagram arcs):")
for name, word, strands in [
    ("trefoil", [1, 1, 1], 2),
    ("figure-eight", [1, -2, 1, -2], 3),
    ("cinquefoil 5_1", [1] * 5, 2),
    ("5_2", [1, 1, 1, 2, -1, 2], 3),
    ("6_3", [1, 1, -2, 1, -2, -2], 3),
    ("7_1", [1] * 7, 2),
    ("granny", [1, 1, 1, 2, 2, 2], 3),
]:
    delta = fox_alexander(knot_from_braid(word, strands))
    print(f"  {name:16}: {delta}")
    assert delta(1) in (1, -1)                                   # augmentation
    assert delta.normalized() == delta.reversed_var().normalized()  # palindrome

print()
print("Every value satisfies Delta(1) = +-1 and Delta(t) = Delta(1/t) up to units,")
print("the two classical sanity identities for knot Alexander polynomials.")
