#!/usr/bin/env python3
"""Writes the bundled office maps into data/maps."""

import argparse
import pathlib

W, H = 115, 164  # cells at 0.4 m
CORRIDOR_X = (52, 62)
CORRIDOR_Y = (77, 86)


def office():
    g = [[False] * W for _ in range(H)]

    def block(x0, y0, x1, y1):
        for y in range(max(y0, 0), min(y1, H)):
            for x in range(max(x0, 0), min(x1, W)):
                g[y][x] = True

    def clear(x0, y0, x1, y1):
        for y in range(max(y0, 0), min(y1, H)):
            for x in range(max(x0, 0), min(x1, W)):
                g[y][x] = False

    # corridor walls
    cx0, cx1 = CORRIDOR_X
    cy0, cy1 = CORRIDOR_Y
    block(cx0 - 1, 0, cx0, H)
    block(cx1, 0, cx1 + 1, H)
    block(0, cy0 - 1, W, cy0)
    block(0, cy1, W, cy1 + 1)
    clear(cx0, 0, cx1, H)
    clear(0, cy0, W, cy1)

    # rooms: split each wing into bands, doors onto the vertical corridor
    bands = [(1, 26), (26, 52), (52, 76), (87, 112), (112, 138), (138, 163)]
    for i, (y0, y1) in enumerate(bands):
        if y1 not in (76, 163):
            block(0, y1, cx0 - 1, y1 + 1)
            block(cx1 + 1, y1, W, y1 + 1)
        door = y0 + 4 + (i % 3) * 3
        clear(cx0 - 1, door, cx0, door + 4)
        clear(cx1, door + 6, cx1 + 1, door + 10)
        # a second door between neighbouring rooms of the west wing
        if y1 not in (76, 163):
            clear(10 + 8 * (i % 3), y1, 14 + 8 * (i % 3), y1 + 1)

        # desk rows
        for x0, x1 in ((3, cx0 - 4), (cx1 + 4, W - 3)):
            y = y0 + 5
            while y + 3 < y1 - 3:
                x = x0 + 2
                while x + 7 < x1:
                    block(x, y, x + 7, y + 2)
                    x += 11
                y += 7

    # outer walls
    block(0, 0, W, 1)
    block(0, H - 1, W, H)
    block(0, 0, 1, H)
    block(W - 1, 0, W, H)

    # pillars along the horizontal corridor
    for x in range(8, W - 8, 18):
        if not (cx0 - 2 <= x <= cx1 + 2):
            block(x, cy0 + 3, x + 2, cy0 + 5)
    return g


def upsample(g, k):
    return [[c for c in row for _ in range(k)] for row in g for _ in range(k)]


def write(path, g, res):
    lines = [f"resolution_m {res}"]
    lines += ["".join("#" if c else "." for c in row) for row in g]
    path.write_text("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "maps"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    g = office()
    write(out / "office_desks.txt", g, 0.4)
    big = upsample(g, 2)
    big = [row[:229] for row in big[:328]]
    write(out / "office_desks_fine.txt", big, 0.2)


if __name__ == "__main__":
    main()
