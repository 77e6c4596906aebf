#!/usr/bin/env python3
"""Regenerates the grayscale PGM fixtures under tests/data.

All source photographs ship with scikit-image and are CC0 or public domain
(see the scikit-image data module docstrings). Colour images are converted to
luminance, then every image is box-downsampled so that texture scale roughly
matches the 128x128 test image.

    python3 scripts/make_test_images.py tests/data
"""

import pathlib
import sys

import numpy as np
from skimage import color, data

CORPUS = ["chelsea", "coffee", "rocket", "astronaut", "grass", "gravel", "brick", "coins"]
TEST_IMAGE = "camera"


def to_gray_u8(img):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3]) * 255.0
    return np.asarray(img, dtype=np.float64)


def box_downsample(img, factor):
    h = (img.shape[0] // factor) * factor
    w = (img.shape[1] // factor) * factor
    img = img[:h, :w]
    return img.reshape(h // factor, factor, w // factor, factor).mean(axis=(1, 3))


def write_pgm(path, img):
    img = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (img.shape[1], img.shape[0]))
        f.write(img.tobytes())


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
    out.mkdir(parents=True, exist_ok=True)
    for name in CORPUS:
        img = box_downsample(to_gray_u8(getattr(data, name)()), 2)
        write_pgm(out / f"corpus_{name}.pgm", img)
    test = box_downsample(to_gray_u8(getattr(data, TEST_IMAGE)()), 4)
    write_pgm(out / f"test_{TEST_IMAGE}_128.pgm", test)


if __name__ == "__main__":
    main()
