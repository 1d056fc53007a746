import random

import pytest

from scenekg.scene import GenConfig, Rect, Scene, generate_scene


def make_scene(rect_tuples, width=1000.0, height=1000.0, scene_id="s"):
    """Scene from (id, x, y, w, h) tuples."""
    rects = [Rect(rid, float(x), float(y), float(w), float(h))
             for rid, x, y, w, h in rect_tuples]
    return Scene(scene_id, float(width), float(height), rects)


def random_rect(rng: random.Random, rid: str, width=1000.0,
                height=1000.0) -> Rect:
    w = rng.uniform(1.0, width / 2)
    h = rng.uniform(1.0, height / 2)
    return Rect(rid, rng.uniform(0.0, width - w),
                rng.uniform(0.0, height - h), w, h)


@pytest.fixture(scope="session")
def clean_scene():
    """Small noise-free generated scene with its ground truth."""
    return generate_scene(GenConfig(n_shelves=4, products_per_shelf=(3, 5),
                                    rng_seed=7))


@pytest.fixture(scope="session")
def noisy_scene():
    """Generated scene with every noise channel enabled."""
    return generate_scene(GenConfig(n_shelves=6, products_per_shelf=(4, 7),
                                    stack_prob=0.2, jitter_sigma=0.03,
                                    spurious_rate=1.5, dropout_rate=0.05,
                                    rng_seed=11))
