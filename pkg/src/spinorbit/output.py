"""File writers for frames, profiles and reports."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

SCHEMA_VERSION = "1.0"


def quantize(power: np.ndarray) -> tuple[np.ndarray, float]:
    """8-bit image round(255 P / P_max) and the P_max used."""
    p_max = float(np.max(power)) if power.size else 0.0
    if p_max <= 0:
        return np.zeros(power.shape, dtype=np.uint8), p_max
    img = np.rint(255.0 * np.clip(power, 0, None) / p_max)
    return img.astype(np.uint8), p_max


def write_pgm(path: Path, image: np.ndarray) -> None:
    if image.dtype != np.uint8 or image.ndim != 2:
        raise ValueError("PGM frames must be 2-D uint8")
    h, w = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(image).tobytes())


def read_pgm(path: Path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError(f"{path} is not a binary PGM")
    w, h = (int(t) for t in parts[1].split())
    if int(parts[2]) != 255:
        raise ValueError("only maxval 255 is supported")
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def write_png(path: Path, image: np.ndarray) -> None:
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise RuntimeError("PNG export needs Pillow: pip install 'artifact[png]'") from exc
    Image.fromarray(image, mode="L").save(path, format="PNG")


def write_profile_csv(path: Path, phi, r_over_w0, power) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["phi_rad", "r_over_w0", "power"])
        for row in zip(np.broadcast_to(phi, np.shape(power)), np.broadcast_to(r_over_w0, np.shape(power)), power):
            w.writerow([repr(float(v)) for v in row])


def write_rows_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def write_json(path: Path, payload: dict) -> None:
    doc = {"schema_version": SCHEMA_VERSION, **payload}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
