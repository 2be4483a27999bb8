"""Built-in bitmap glyphs for the 73-character alphabet.

Original dot-matrix style artwork (public domain).  Every glyph lives on a
9-row grid: rows 0-6 hold the capital height, the baseline sits under row 6,
and rows 7-8 form the descender zone.  Glyphs are drawn with '#' for ink and
'.' for background; side columns are trimmed when rendering, so widths vary.
"""

import numpy as np

GLYPH_ROWS = 9
BASELINE_ROW = 6

# fmt: off
GLYPHS = {
    "#": (".#.#.",
          "#####",
          ".#.#.",
          ".#.#.",
          ".#.#.",
          "#####",
          ".#.#.",
          ".....",
          "....."),
    "&": (".##..",
          "#..#.",
          "#..#.",
          ".##..",
          "#.#.#",
          "#..#.",
          ".##.#",
          ".....",
          "....."),
    "(": ("..#",
          ".#.",
          "#..",
          "#..",
          "#..",
          ".#.",
          "..#",
          "...",
          "..."),
    ")": ("#..",
          ".#.",
          "..#",
          "..#",
          "..#",
          ".#.",
          "#..",
          "...",
          "..."),
    "+": (".....",
          ".....",
          "..#..",
          "..#..",
          "#####",
          "..#..",
          "..#..",
          ".....",
          "....."),
    ",": ("..",
          "..",
          "..",
          "..",
          "..",
          "##",
          "##",
          ".#",
          "#."),
    "-": ("....",
          "....",
          "....",
          "####",
          "####",
          "....",
          "....",
          "....",
          "...."),
    ".": ("..",
          "..",
          "..",
          "..",
          "..",
          "##",
          "##",
          "..",
          ".."),
    "/": ("....#",
          "...#.",
          "...#.",
          "..#..",
          ".#...",
          ".#...",
          "#....",
          ".....",
          "....."),
    "0": (".###.",
          "#...#",
          "#..##",
          "#.#.#",
          "##..#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "1": ("..#..",
          ".##..",
          "#.#..",
          "..#..",
          "..#..",
          "..#..",
          "#####",
          ".....",
          "....."),
    "2": (".###.",
          "#...#",
          "....#",
          "..##.",
          ".#...",
          "#....",
          "#####",
          ".....",
          "....."),
    "3": ("####.",
          "....#",
          "....#",
          ".###.",
          "....#",
          "....#",
          "####.",
          ".....",
          "....."),
    "4": ("...#.",
          "..##.",
          ".#.#.",
          "#..#.",
          "#####",
          "...#.",
          "...#.",
          ".....",
          "....."),
    "5": ("#####",
          "#....",
          "####.",
          "....#",
          "....#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "6": (".###.",
          "#....",
          "#....",
          "####.",
          "#...#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "7": ("#####",
          "....#",
          "...#.",
          "..#..",
          ".#...",
          ".#...",
          ".#...",
          ".....",
          "....."),
    "8": (".###.",
          "#...#",
          "#...#",
          ".###.",
          "#...#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "9": (".###.",
          "#...#",
          "#...#",
          ".####",
          "....#",
          "....#",
          ".###.",
          ".....",
          "....."),
    ":": ("..",
          "..",
          "##",
          "##",
          "..",
          "##",
          "##",
          "..",
          ".."),
    "@": (".###.",
          "#...#",
          "#.###",
          "#.#.#",
          "#.##.",
          "#....",
          ".###.",
          ".....",
          "....."),
    "A": (".###.",
          "#...#",
          "#...#",
          "#####",
          "#...#",
          "#...#",
          "#...#",
          ".....",
          "....."),
    "B": ("####.",
          "#...#",
          "#...#",
          "####.",
          "#...#",
          "#...#",
          "####.",
          ".....",
          "....."),
    "C": (".###.",
          "#...#",
          "#....",
          "#....",
          "#....",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "D": ("####.",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          "####.",
          ".....",
          "....."),
    "E": ("#####",
          "#....",
          "#....",
          "####.",
          "#....",
          "#....",
          "#####",
          ".....",
          "....."),
    "F": ("#####",
          "#....",
          "#....",
          "####.",
          "#....",
          "#....",
          "#....",
          ".....",
          "....."),
    "G": (".###.",
          "#...#",
          "#....",
          "#.###",
          "#...#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "H": ("#...#",
          "#...#",
          "#...#",
          "#####",
          "#...#",
          "#...#",
          "#...#",
          ".....",
          "....."),
    "I": ("###",
          ".#.",
          ".#.",
          ".#.",
          ".#.",
          ".#.",
          "###",
          "...",
          "..."),
    "J": ("..###",
          "...#.",
          "...#.",
          "...#.",
          "...#.",
          "#..#.",
          ".##..",
          ".....",
          "....."),
    "K": ("#...#",
          "#..#.",
          "#.#..",
          "##...",
          "#.#..",
          "#..#.",
          "#...#",
          ".....",
          "....."),
    "L": ("#....",
          "#....",
          "#....",
          "#....",
          "#....",
          "#....",
          "#####",
          ".....",
          "....."),
    "M": ("#...#",
          "##.##",
          "#.#.#",
          "#.#.#",
          "#...#",
          "#...#",
          "#...#",
          ".....",
          "....."),
    "N": ("#...#",
          "##..#",
          "#.#.#",
          "#..##",
          "#...#",
          "#...#",
          "#...#",
          ".....",
          "....."),
    "O": (".###.",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "P": ("####.",
          "#...#",
          "#...#",
          "####.",
          "#....",
          "#....",
          "#....",
          ".....",
          "....."),
    "Q": (".###.",
          "#...#",
          "#...#",
          "#...#",
          "#.#.#",
          "#..#.",
          ".##.#",
          ".....",
          "....."),
    "R": ("####.",
          "#...#",
          "#...#",
          "####.",
          "#.#..",
          "#..#.",
          "#...#",
          ".....",
          "....."),
    "S": (".####",
          "#....",
          "#....",
          ".###.",
          "....#",
          "....#",
          "####.",
          ".....",
          "....."),
    "T": ("#####",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          ".....",
          "....."),
    "U": ("#...#",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "V": ("#...#",
          "#...#",
          "#...#",
          "#...#",
          ".#.#.",
          ".#.#.",
          "..#..",
          ".....",
          "....."),
    "W": ("#...#",
          "#...#",
          "#...#",
          "#.#.#",
          "#.#.#",
          "##.##",
          "#...#",
          ".....",
          "....."),
    "X": ("#...#",
          "#...#",
          ".#.#.",
          "..#..",
          ".#.#.",
          "#...#",
          "#...#",
          ".....",
          "....."),
    "Y": ("#...#",
          "#...#",
          ".#.#.",
          "..#..",
          "..#..",
          "..#..",
          "..#..",
          ".....",
          "....."),
    "Z": ("#####",
          "....#",
          "...#.",
          "..#..",
          ".#...",
          "#....",
          "#####",
          ".....",
          "....."),
    "a": (".....",
          ".....",
          ".###.",
          "....#",
          ".####",
          "#...#",
          ".####",
          ".....",
          "....."),
    "b": ("#....",
          "#....",
          "####.",
          "#...#",
          "#...#",
          "#...#",
          "####.",
          ".....",
          "....."),
    "c": (".....",
          ".....",
          ".####",
          "#....",
          "#....",
          "#....",
          ".####",
          ".....",
          "....."),
    "d": ("....#",
          "....#",
          ".####",
          "#...#",
          "#...#",
          "#...#",
          ".####",
          ".....",
          "....."),
    "e": (".....",
          ".....",
          ".###.",
          "#...#",
          "#####",
          "#....",
          ".####",
          ".....",
          "....."),
    "f": ("..##.",
          ".#...",
          "####.",
          ".#...",
          ".#...",
          ".#...",
          ".#...",
          ".....",
          "....."),
    "g": (".....",
          ".....",
          ".####",
          "#...#",
          "#...#",
          "#...#",
          ".####",
          "....#",
          ".###."),
    "h": ("#....",
          "#....",
          "####.",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          ".....",
          "....."),
    "i": (".#.",
          "...",
          "##.",
          ".#.",
          ".#.",
          ".#.",
          "###",
          "...",
          "..."),
    "j": ("..#",
          "...",
          "..#",
          "..#",
          "..#",
          "..#",
          "..#",
          "..#",
          "##."),
    "k": ("#....",
          "#....",
          "#..#.",
          "#.#..",
          "##...",
          "#.#..",
          "#..#.",
          ".....",
          "....."),
    "l": ("##.",
          ".#.",
          ".#.",
          ".#.",
          ".#.",
          ".#.",
          ".##",
          "...",
          "..."),
    "m": (".....",
          ".....",
          "##.#.",
          "#.#.#",
          "#.#.#",
          "#.#.#",
          "#.#.#",
          ".....",
          "....."),
    "n": (".....",
          ".....",
          "####.",
          "#...#",
          "#...#",
          "#...#",
          "#...#",
          ".....",
          "....."),
    "o": (".....",
          ".....",
          ".###.",
          "#...#",
          "#...#",
          "#...#",
          ".###.",
          ".....",
          "....."),
    "p": (".....",
          ".....",
          "####.",
          "#...#",
          "#...#",
          "#...#",
          "####.",
          "#....",
          "#...."),
    "q": (".....",
          ".....",
          ".####",
          "#...#",
          "#...#",
          "#...#",
          ".####",
          "....#",
          "....#"),
    "r": (".....",
          ".....",
          "#.##.",
          "##..#",
          "#....",
          "#....",
          "#....",
          ".....",
          "....."),
    "s": (".....",
          ".....",
          ".####",
          "#....",
          ".###.",
          "....#",
          "####.",
          ".....",
          "....."),
    "t": (".#...",
          ".#...",
          "####.",
          ".#...",
          ".#...",
          ".#...",
          "..##.",
          ".....",
          "....."),
    "u": (".....",
          ".....",
          "#...#",
          "#...#",
          "#...#",
          "#..##",
          ".##.#",
          ".....",
          "....."),
    "v": (".....",
          ".....",
          "#...#",
          "#...#",
          "#...#",
          ".#.#.",
          "..#..",
          ".....",
          "....."),
    "w": (".....",
          ".....",
          "#...#",
          "#...#",
          "#.#.#",
          "#.#.#",
          ".#.#.",
          ".....",
          "....."),
    "x": (".....",
          ".....",
          "#...#",
          ".#.#.",
          "..#..",
          ".#.#.",
          "#...#",
          ".....",
          "....."),
    "y": (".....",
          ".....",
          "#...#",
          "#...#",
          "#...#",
          ".#.#.",
          "..#..",
          "..#..",
          ".#..."),
    "z": (".....",
          ".....",
          "#####",
          "...#.",
          "..#..",
          ".#...",
          "#####",
          ".....",
          "....."),
}
# fmt: on

ALPHABET = tuple(sorted(GLYPHS))

# Characters whose ink starts in the top two grid rows.  Generated lines are
# required to contain at least one so text lines have full vertical extent.
TALL_CHARS = frozenset(
    ch for ch, rows in GLYPHS.items()
    if any("#" in rows[r] for r in (0, 1))
)


def glyph_mask(ch):
    """Return the 9-row ink mask of a character as a bool array.

    Side columns that carry no ink are trimmed; empty rows are kept so every
    glyph shares the common baseline grid.
    """
    try:
        rows = GLYPHS[ch]
    except KeyError:
        raise KeyError(f"character {ch!r} is not in the supported alphabet") from None
    mask = np.array([[c == "#" for c in row] for row in rows], dtype=bool)
    cols = np.flatnonzero(mask.any(axis=0))
    return mask[:, cols[0] : cols[-1] + 1]
