"""Why a valid-looking boundary datum can have no extension.

Pin heights 1 and 5 on the two mid-edge vertices of a 3x3 box. Along
the boundary ring those vertices are 4 steps apart, so a height change
of 4 is fine there — the ring admits exactly one completion. Inside the
box they are only 2 steps apart, and a height function can change by at
most 1 per step, so the gap |5 - 1| = 4 is unbridgeable: the unique
ring datum extends to nothing.
"""

from randomsurfaces.heights import enumerate_extensions, kirszbraun_extendable
from randomsurfaces.lattice import Region, graph_distance, make_box


def main() -> None:
    box = make_box((0, 0), (2, 2))
    ring = Region([v for v in box.vertex_list if v != (1, 1)])
    a, b = (0, 1), (2, 1)
    pin = {a: 1, b: 5}

    print(f"distance {a} -> {b} on the ring: {graph_distance(ring, a, b)}")
    print(f"distance {a} -> {b} in the box:  {graph_distance(box, a, b)}")

    ring_completions = enumerate_extensions(ring, pin)
    print(f"\nring completions of {pin}: {len(ring_completions)}")
    for f in ring_completions:
        print("  ", dict(sorted(f.as_dict().items())))

    print(f"\nextendable to the box? {kirszbraun_extendable(box, pin)}")
    box_extensions = enumerate_extensions(box, pin)
    print(f"box extensions: {len(box_extensions)}")
    print("\nthe metric criterion (gap <= in-region distance) is exact:")
    print("  |5 - 1| = 4 > 2, so enumeration finds nothing.")


if __name__ == "__main__":
    main()
