#!/usr/bin/env python3
"""Regenerate the shipped warehouse maps under maps/.

Shelf area: 10 x 8 blocks of 2x10 shelves (1600 shelves), one-cell aisles
between blocks. Cache blocks of 4 rows sit next to their port, rows
port-2 .. port+1.
"""
import pathlib

SHELF_ROWS = 10      # block rows, each: shelf, shelf, aisle
SHELF_COLS = 8       # block columns, 10 wide, 1-cell separators
BLOCK_W = 10


def shelf_band(width_before):
    """Return (height, list of (row, col) shelves) offset by width_before."""
    cells = []
    for b in range(SHELF_ROWS):
        for r in (2 + 3 * b, 3 + 3 * b):
            for j in range(SHELF_COLS):
                c0 = width_before + j * (BLOCK_W + 1)
                cells.extend((r, c) for c in range(c0, c0 + BLOCK_W))
    return 2 + 3 * SHELF_ROWS + 1, cells


def render(height, width, shelves, caches, ports):
    grid = [['.'] * width for _ in range(height)]
    for r in range(height):
        grid[r][0] = grid[r][width - 1] = '@'
    for c in range(width):
        grid[0][c] = grid[height - 1][c] = '@'
    for r, c in shelves:
        grid[r][c] = 'S'
    for r, c in caches:
        grid[r][c] = 'C'
    for r, c in ports:
        grid[r][c] = 'U'
    return '\n'.join(''.join(row) for row in grid) + '\n'


def multi_port():
    shelf_width = SHELF_COLS * (BLOCK_W + 1) - 1
    left = 10
    width = left + shelf_width + 10
    height, shelves = shelf_band(left)
    ports = [(8, 1), (24, 1), (8, width - 2), (24, width - 2)]
    caches = []
    for pr, pc in ports:
        cols = range(3, 8) if pc == 1 else range(width - 8, width - 3)
        caches.extend((r, c) for r in range(pr - 2, pr + 2) for c in cols)
    return render(height, width, shelves, caches, ports)


def single_port():
    shelf_width = SHELF_COLS * (BLOCK_W + 1) - 1
    left = 25
    width = left + shelf_width + 2
    height, shelves = shelf_band(left)
    ports = [(16, 1)]
    caches = [(r, c) for r in range(14, 18) for c in range(3, 23)]
    return render(height, width, shelves, caches, ports)


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / 'maps'
    out.mkdir(exist_ok=True)
    header = '# generated by tools/gen_maps.py\n'
    (out / 'warehouse_multi.map').write_text(header + multi_port())
    (out / 'warehouse_single.map').write_text(header + single_port())
    (out / 'toy.map').write_text('@@@@@@@\n@S.C.U@\n@S....@\n@S.C..@\n@@@@@@@\n')


if __name__ == '__main__':
    main()
