"""Image primitives shared by every pipeline stage.

Images are numpy arrays, row-major, origin at the top-left, x = column and
y = row:

* color image -- uint8 array of shape (height, width, 3), RGB order
* gray image  -- uint8 array of shape (height, width)
* binary image -- bool array of shape (height, width), True = foreground

File I/O is limited to binary PGM ("P5") and PPM ("P6") with maxval 255,
which round-trip bit-exactly without any third-party decoder.
"""

import math
from dataclasses import dataclass

import numpy as np

GRAY_LEVELS = 256
MAX_ROTATION_DEG = 45.0


class PnmError(ValueError):
    """Raised for malformed, truncated or unsupported PNM data."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle: x/y is the top-left corner, w/h the size."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"rectangle must have positive size, got {self.w}x{self.h}")

    @property
    def x2(self):
        """One past the rightmost column."""
        return self.x + self.w

    @property
    def y2(self):
        """One past the bottom row."""
        return self.y + self.h

    def contains(self, other):
        return (
            self.x <= other.x
            and self.y <= other.y
            and other.x2 <= self.x2
            and other.y2 <= self.y2
        )


def is_color(img):
    return img.ndim == 3


def to_grayscale(img):
    """Convert an RGB image to gray with the 0.299/0.587/0.114 weighting.

    Computed in integer arithmetic as (299r + 587g + 114b + 500) // 1000,
    i.e. rounding half up, so (v, v, v) maps to exactly v.
    """
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an RGB array of shape (h, w, 3), got {img.shape}")
    # two uint32 planes total; the green/blue plane is reused in place to
    # keep the transient footprint small on multi-megapixel inputs
    acc = img[:, :, 0].astype(np.uint32)
    acc *= 299
    tmp = img[:, :, 1].astype(np.uint32)
    tmp *= 587
    acc += tmp
    tmp[:] = img[:, :, 2]
    tmp *= 114
    acc += tmp
    acc += 500
    acc //= 1000
    return acc.astype(np.uint8)


def _parse_header_tokens(data, count):
    """Read `count` whitespace-separated tokens after the magic, honoring
    '#' comments.  Returns (tokens, offset of the payload)."""
    tokens = []
    i = 2  # past the two magic bytes
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] != b"\n":
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace():
            i += 1
        if i == start:
            raise PnmError("malformed header: ran out of data while reading dimensions")
        tokens.append(data[start:i])
    if i >= n:
        raise PnmError("malformed header: missing payload")
    i += 1  # single whitespace byte after maxval
    return tokens, i


def load_pnm(data):
    """Decode binary PGM/PPM bytes into a gray or color array."""
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise PnmError(f"malformed header: unsupported magic {magic!r}")
    tokens, offset = _parse_header_tokens(data, 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise PnmError(f"malformed header: non-numeric fields {tokens!r}") from None
    if width < 1 or height < 1:
        raise PnmError(f"malformed header: bad dimensions {width}x{height}")
    if maxval != 255:
        raise PnmError(f"unsupported maxval {maxval} (only 255 is handled)")
    expected = width * height * channels
    payload = data[offset : offset + expected]
    if len(payload) < expected:
        raise PnmError(
            f"truncated payload: expected {expected} bytes, got {len(payload)}"
        )
    arr = np.frombuffer(payload, dtype=np.uint8, count=expected)
    if channels == 1:
        return arr.reshape(height, width).copy()
    return arr.reshape(height, width, 3).copy()


def save_pnm(img):
    """Encode a gray, color or binary array as binary PGM/PPM bytes.

    Binary images are written as PGM with foreground = 0, background = 255.
    """
    if img.dtype == bool:
        img = np.where(img, 0, 255).astype(np.uint8)
    if img.dtype != np.uint8:
        raise ValueError(f"expected uint8 or bool pixels, got {img.dtype}")
    if img.ndim == 2:
        magic = b"P5"
    elif img.ndim == 3 and img.shape[2] == 3:
        magic = b"P6"
    else:
        raise ValueError(f"unsupported image shape {img.shape}")
    h, w = img.shape[:2]
    header = magic + b"\n%d %d\n255\n" % (w, h)
    return header + img.tobytes()


def load_pnm_file(path):
    with open(path, "rb") as fh:
        return load_pnm(fh.read())


def save_pnm_file(path, img):
    with open(path, "wb") as fh:
        fh.write(save_pnm(img))


def crop(img, rect):
    """Return a copy of the pixels inside `rect`."""
    h, w = img.shape[:2]
    if not Rect(0, 0, w, h).contains(rect):
        raise ValueError(f"crop rectangle {rect} exceeds image bounds {w}x{h}")
    return img[rect.y : rect.y2, rect.x : rect.x2].copy()


def rotate(img, angle_deg, fill=255):
    """Rotate a gray image by `angle_deg` counter-clockwise (as displayed).

    The canvas grows to hold the rotated bounding box.  Resampling is
    inverse-mapped bilinear; destination pixels that fall outside the source
    take the fill intensity.  Angles beyond +/-45 degrees are rejected.
    """
    if abs(angle_deg) > MAX_ROTATION_DEG:
        raise ValueError(f"rotation angle {angle_deg} outside +/-{MAX_ROTATION_DEG}")
    if img.ndim != 2:
        raise ValueError("rotate expects a gray image of shape (h, w)")
    h, w = img.shape
    theta = math.radians(angle_deg)
    c, s = math.cos(theta), math.sin(theta)
    # Grow the canvas symmetrically so the source center stays on the same
    # pixel parity; a rotate/unrotate pair then maps the original footprint
    # back onto exact integer positions.
    pad_x = max(0, int(math.ceil((w * abs(c) + h * abs(s) - w) / 2 - 1e-9)))
    pad_y = max(0, int(math.ceil((w * abs(s) + h * abs(c) - h) / 2 - 1e-9)))
    out_w = w + 2 * pad_x
    out_h = h + 2 * pad_y

    # Pad the source with one ring of fill so bilinear taps that straddle the
    # border blend into fill and far-outside taps clamp onto pure fill.
    padded = np.full((h + 2, w + 2), fill, dtype=np.float32)
    padded[1:-1, 1:-1] = img

    cx_d, cy_d = (out_w - 1) / 2.0, (out_h - 1) / 2.0
    cx_s, cy_s = (w - 1) / 2.0, (h - 1) / 2.0
    dx = np.arange(out_w, dtype=np.float32) - np.float32(cx_d)
    dy = (np.arange(out_h, dtype=np.float32) - np.float32(cy_d))[:, None]
    # Inverse of a counter-clockwise rotation in y-down pixel coordinates.
    xs = np.float32(cx_s) + dx * np.float32(c) - dy * np.float32(s)
    ys = np.float32(cy_s) + dx * np.float32(s) + dy * np.float32(c)

    xs += 1.0  # shift into padded coordinates
    ys += 1.0
    np.clip(xs, 0.0, w + 1 - 1e-4, out=xs)
    np.clip(ys, 0.0, h + 1 - 1e-4, out=ys)
    x0 = xs.astype(np.int32)
    y0 = ys.astype(np.int32)
    fx = xs - x0
    fy = ys - y0

    p00 = padded[y0, x0]
    p01 = padded[y0, x0 + 1]
    p10 = padded[y0 + 1, x0]
    p11 = padded[y0 + 1, x0 + 1]
    top = p00 + (p01 - p00) * fx
    bot = p10 + (p11 - p10) * fx
    out = top + (bot - top) * fy
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)
