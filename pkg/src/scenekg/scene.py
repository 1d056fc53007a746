"""Rectangle scenes: the symbolic L1 world.

Coordinates use the image convention: y grows downward, (x, y) is the
top-left corner. The synthetic generator lays out full-width shelf bands
stacked vertically, products resting on each band's bottom edge, optional
product-on-product stacks, and a three-stage noise model (jitter, spurious
rects, product dropout). Generation is a pure function of its config,
including the seed.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .errors import (
    ConfigInvalid,
    DuplicateRectId,
    MalformedDocument,
    NonPositiveExtent,
    OutOfBounds,
)

LABELS = ("Shelf", "Product", "Other")

SLOT_HEIGHT = 80.0      # vertical slot per shelf band, scene units
SCENE_WIDTH = 1000.0
BAND_GAP_FRAC = 0.6     # top of each slot left empty between bands


@dataclass(frozen=True)
class Rect:
    id: str
    x: float
    y: float
    w: float
    h: float

    @property
    def right(self):
        return self.x + self.w

    @property
    def bottom(self):
        return self.y + self.h

    @property
    def area(self):
        return self.w * self.h


@dataclass(frozen=True)
class DerivedAttrs:
    center: tuple
    area: float
    circumference: float


def derived(rect: Rect) -> DerivedAttrs:
    return DerivedAttrs(
        center=(rect.x + rect.w / 2.0, rect.y + rect.h / 2.0),
        area=rect.w * rect.h,
        circumference=2.0 * (rect.w + rect.h),
    )


@dataclass
class Scene:
    scene_id: str
    width: float
    height: float
    rects: list = field(default_factory=list)

    def rect_ids(self):
        return [r.id for r in self.rects]

    def by_id(self, rect_id) -> Rect:
        for r in self.rects:
            if r.id == rect_id:
                return r
        raise KeyError(rect_id)


@dataclass
class GroundTruth:
    labels: dict  # rect id -> label


@dataclass(frozen=True)
class GenConfig:
    n_shelves: int = 16
    products_per_shelf: tuple = (5, 9)
    stack_prob: float = 0.0
    jitter_sigma: float = 0.0
    spurious_rate: float = 1.8
    dropout_rate: float = 0.0
    rng_seed: int = 0

    def check(self):
        lo, hi = self.products_per_shelf
        if self.n_shelves < 1:
            raise ConfigInvalid("n_shelves must be >= 1")
        if not (0 < lo <= hi):
            raise ConfigInvalid("products_per_shelf must be a positive (min,max)")
        if not 0.0 <= self.stack_prob <= 1.0:
            raise ConfigInvalid("stack_prob must be in [0,1]")
        if self.jitter_sigma < 0.0:
            raise ConfigInvalid("jitter_sigma must be >= 0")
        if self.spurious_rate < 0.0:
            raise ConfigInvalid("spurious_rate must be >= 0")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigInvalid("dropout_rate must be in [0,1)")

    @classmethod
    def from_doc(cls, doc) -> "GenConfig":
        try:
            kwargs = dict(doc)
            if "products_per_shelf" in kwargs:
                kwargs["products_per_shelf"] = tuple(kwargs["products_per_shelf"])
            cfg = cls(**kwargs)
        except TypeError as exc:
            raise ConfigInvalid(f"bad generator config: {exc}") from exc
        cfg.check()
        return cfg

    def to_doc(self) -> dict:
        return {
            "n_shelves": self.n_shelves,
            "products_per_shelf": list(self.products_per_shelf),
            "stack_prob": self.stack_prob,
            "jitter_sigma": self.jitter_sigma,
            "spurious_rate": self.spurious_rate,
            "dropout_rate": self.dropout_rate,
            "rng_seed": self.rng_seed,
        }


# --- file format ---

def _fmt(value: float) -> str:
    return f"{value:.6f}"


def dump_scene(scene: Scene) -> bytes:
    rects = sorted(scene.rects, key=lambda r: r.id)
    lines = ["{"]
    lines.append(f'  "scene_id": {json.dumps(scene.scene_id)},')
    lines.append(f'  "width": {_fmt(scene.width)},')
    lines.append(f'  "height": {_fmt(scene.height)},')
    lines.append('  "rects": [')
    for i, r in enumerate(rects):
        comma = "," if i + 1 < len(rects) else ""
        lines.append(
            f'    {{"id": {json.dumps(r.id)}, "x": {_fmt(r.x)}, "y": {_fmt(r.y)},'
            f' "w": {_fmt(r.w)}, "h": {_fmt(r.h)}}}{comma}'
        )
    lines.append("  ]")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_scene(data: bytes) -> Scene:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedDocument(f"not a scene document: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("scene document must be an object")
    try:
        scene = Scene(str(doc["scene_id"]), float(doc["width"]),
                      float(doc["height"]))
        entries = doc["rects"]
        if not isinstance(entries, list):
            raise MalformedDocument("rects must be an array")
        for entry in entries:
            rect = Rect(str(entry["id"]), float(entry["x"]), float(entry["y"]),
                        float(entry["w"]), float(entry["h"]))
            scene.rects.append(rect)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad scene field: {exc}") from exc
    seen = set()
    for rect in scene.rects:
        if rect.w <= 0 or rect.h <= 0:
            raise NonPositiveExtent(f"rect {rect.id} has extent {rect.w}x{rect.h}")
        if rect.id in seen:
            raise DuplicateRectId(rect.id)
        seen.add(rect.id)
        if (rect.x >= scene.width or rect.right <= 0
                or rect.y >= scene.height or rect.bottom <= 0):
            raise OutOfBounds(f"rect {rect.id} lies outside the scene bounds")
    scene.rects.sort(key=lambda r: r.id)
    return scene


def dump_ground_truth(gt: GroundTruth) -> bytes:
    lines = ["{", '  "labels": {']
    items = sorted(gt.labels.items())
    for i, (rect_id, label) in enumerate(items):
        comma = "," if i + 1 < len(items) else ""
        lines.append(f"    {json.dumps(rect_id)}: {json.dumps(label)}{comma}")
    lines.append("  }")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_ground_truth(data: bytes) -> GroundTruth:
    try:
        doc = json.loads(data.decode("utf-8"))
        labels = doc["labels"]
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MalformedDocument(f"not a ground-truth document: {exc}") from exc
    out = {}
    for rect_id, label in labels.items():
        if label not in LABELS:
            raise MalformedDocument(f"unknown label {label!r} for {rect_id}")
        out[str(rect_id)] = label
    return GroundTruth(out)


# --- synthetic generator ---

def _poisson(rng: random.Random, lam: float) -> int:
    if lam <= 0.0:
        return 0
    threshold = math.exp(-lam)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= threshold:
            return k
        k += 1


def _q(v: float) -> float:
    # quantize to the file format's 6 decimals so dump/load round-trips
    return round(v, 6)


def _snap(v: float) -> float:
    # Snap generated geometry to multiples of 1/64: exactly representable
    # both in binary floating point and in the 6-decimal file format, so
    # zero-gap contacts (products resting on bands, stacked products)
    # survive arithmetic and serialization exactly.
    return round(v * 64.0) / 64.0


def generate_scene(config: GenConfig):
    """Build a (Scene, GroundTruth) pair; deterministic in the config."""
    config.check()
    rng = random.Random(config.rng_seed)
    width = SCENE_WIDTH
    height = SLOT_HEIGHT * config.n_shelves
    band_h = SLOT_HEIGHT * (1.0 - BAND_GAP_FRAC)
    gap_h = SLOT_HEIGHT * BAND_GAP_FRAC
    # Shelf-board thickness: products sit slightly above the band's bottom
    # edge. Half the support tolerance (tau_gap * height) balances the two
    # failure modes under jitter: enough slack below that a jittered shelf
    # bottom rarely cuts off its products, while staying far enough under
    # the support tolerance that resting products rarely count as floating.
    lift = _snap(0.005 * height)
    lo, hi = config.products_per_shelf

    rects = []
    labels = {}
    product_ids = []
    n_product = 0

    for i in range(config.n_shelves):
        shelf_id = f"s{i:02d}"
        band_top = i * SLOT_HEIGHT + SLOT_HEIGHT * BAND_GAP_FRAC
        rects.append(Rect(shelf_id, 0.0, band_top, width, band_h))
        labels[shelf_id] = "Shelf"

        n = rng.randint(lo, hi)
        max_w = min(90.0, (width - 20.0) / n - 25.0)
        x = _snap(10.0 + rng.uniform(0.0, 10.0))
        band_bottom = band_top + band_h
        for _ in range(n):
            w = _snap(rng.uniform(40.0, max_w))
            h = _snap(band_h * rng.uniform(0.22, 0.30))
            if x + w > width - 5.0:
                break
            pid = f"p{n_product:03d}"
            n_product += 1
            base = Rect(pid, x, band_bottom - lift - h, w, h)
            rects.append(base)
            labels[pid] = "Product"
            product_ids.append(pid)
            if rng.random() < config.stack_prob:
                ws = _snap(w * rng.uniform(0.6, 0.95))
                hs = _snap(band_h * rng.uniform(0.18, 0.26))
                xs = _snap(x + (w - ws) * rng.uniform(0.0, 1.0))
                sid = f"p{n_product:03d}"
                n_product += 1
                rects.append(Rect(sid, xs, base.y - lift - hs, ws, hs))
                labels[sid] = "Product"
                product_ids.append(sid)
            x = _snap(x + w + rng.uniform(5.0, 25.0))

    # noise stage 1: per-rect Gaussian jitter on all four parameters
    if config.jitter_sigma > 0.0:
        jittered = []
        for r in rects:
            sigma = config.jitter_sigma * min(r.w, r.h)
            jittered.append(Rect(
                r.id,
                _snap(r.x + rng.gauss(0.0, sigma)),
                _snap(r.y + rng.gauss(0.0, sigma)),
                _snap(max(1.0, r.w + rng.gauss(0.0, sigma))),
                _snap(max(1.0, r.h + rng.gauss(0.0, sigma))),
            ))
        rects = jittered

    # noise stage 2: spurious rects labeled Other, a mixture of two kinds.
    # Wide thin strips mimic mis-detected shelf edges / price rails: they
    # run nearly the scene width (so they x-align with every real shelf)
    # and sit in a uniformly chosen inter-band gap, away from both band
    # edges so they neither rest on nor support anything. Box-like
    # fragments are placed uniformly anywhere.
    n_spurious = _poisson(rng, config.spurious_rate * config.n_shelves)
    n_strip = 0
    for j in range(n_spurious):
        oid = f"o{j:02d}"
        if rng.random() < 0.65:
            w = _snap(width * rng.uniform(0.92, 0.99))
            h = 5.0
            slot = rng.randrange(config.n_shelves)
            # keep clear of both band edges (support tolerance plus a
            # jitter margin), and stagger strips sharing a gap by 0.25 so
            # no strip ever vertically nests inside another
            lo = 0.01 * height + 6.0
            span = gap_h - 2.0 * lo - h
            if span > 0.0:
                offset = lo + 0.25 * (n_strip % (int(span / 0.25) + 1))
            else:
                offset = (gap_h - h) / 2.0
            n_strip += 1
            y = _snap(slot * SLOT_HEIGHT + offset)
        else:
            w = _snap(rng.uniform(15.0, 120.0))
            h = _snap(rng.uniform(10.0, 50.0))
            y = _snap(rng.uniform(0.0, height - h))
        rects.append(Rect(oid, _snap(rng.uniform(0.0, width - w)), y, w, h))
        labels[oid] = "Other"

    # noise stage 3: independent product dropout
    if config.dropout_rate > 0.0:
        dropped = {pid for pid in product_ids
                   if rng.random() < config.dropout_rate}
        rects = [r for r in rects if r.id not in dropped]
        for pid in dropped:
            del labels[pid]

    rects = [Rect(r.id, _q(r.x), _q(r.y), _q(r.w), _q(r.h)) for r in rects]
    rects.sort(key=lambda r: r.id)
    scene = Scene(f"gen-{config.rng_seed}", width, height, rects)
    return scene, GroundTruth(labels)
