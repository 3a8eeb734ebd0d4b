#!/usr/bin/env python3
"""Writes the exhibit hall used by exhibit.json: an 8 x 8 m room with floor
tiles, walls, two pillars, a display case and a glass railing."""

import pathlib

OUT = pathlib.Path(__file__).resolve().parent / "chunks"


def box(x0, y0, z0, x1, y1, z1):
    v = [(x, y, z) for x in (x0, x1) for y in (y0, y1) for z in (z0, z1)]
    # vertex index = 4*ix + 2*iy + iz (1-based in the faces below)
    faces = [
        (1, 2, 4, 3), (5, 7, 8, 6),  # x-, x+
        (1, 5, 6, 2), (3, 4, 8, 7),  # y-, y+
        (1, 3, 7, 5), (2, 6, 8, 4),  # z-, z+
    ]
    return v, faces


def quad_xz(x0, z0, x1, z1, y=0.0):
    return [(x0, y, z0), (x1, y, z0), (x1, y, z1), (x0, y, z1)], [(1, 4, 3, 2)]


def write(name, mesh):
    verts, faces = mesh
    lines = [f"v {x:g} {y:g} {z:g}" for x, y, z in verts]
    lines += ["f " + " ".join(str(i) for i in f) for f in faces]
    (OUT / f"{name}.obj").write_text("\n".join(lines) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    manifest = ["# chunk_id  obj  material"]

    def add(name, mesh, material="opaque"):
        write(name, mesh)
        manifest.append(f"{name} chunks/{name}.obj {material}")

    for i in range(4):
        for j in range(4):
            add(f"floor_{i}_{j}", quad_xz(2 * i, 2 * j, 2 * i + 2, 2 * j + 2))
    add("wall_south", box(-0.2, 0, -0.2, 8.2, 2.5, 0))
    add("wall_north", box(-0.2, 0, 8, 8.2, 2.5, 8.2))
    add("wall_west", box(-0.2, 0, 0, 0, 2.5, 8))
    add("wall_east", box(8, 0, 0, 8.2, 2.5, 8))
    add("pillar_a", box(2.8, 0, 4.8, 3.2, 2.5, 5.2))
    add("pillar_b", box(5.3, 0, 2.8, 5.7, 2.5, 3.2))
    add("display_case", box(5.5, 0, 5.5, 6.5, 0.9, 6.5))
    add("glass_railing", box(1.0, 0, 6.45, 4.0, 1.0, 6.55), "transparent")

    (OUT.parent / "scene.manifest").write_text("\n".join(manifest) + "\n")


if __name__ == "__main__":
    main()
