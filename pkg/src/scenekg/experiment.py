"""Settings x trials experiment harness with and without FoA covers."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace

from .errors import ConfigInvalid, MalformedDocument, SceneKGError
from .foa import FoAConfig, run
from .metrics import score
from .rules import default_rules, parse_rules
from .scene import LABELS, GenConfig, generate_scene
from .spatial import Tolerances

# Four default settings: shelf count x jitter level, constant spurious,
# stacking, and dropout rates.
DEFAULT_SETTINGS = (
    GenConfig(n_shelves=8, products_per_shelf=(5, 9), stack_prob=0.15,
              jitter_sigma=0.02, spurious_rate=2.2, dropout_rate=0.05),
    GenConfig(n_shelves=8, products_per_shelf=(5, 9), stack_prob=0.15,
              jitter_sigma=0.04, spurious_rate=2.2, dropout_rate=0.05),
    GenConfig(n_shelves=16, products_per_shelf=(5, 9), stack_prob=0.15,
              jitter_sigma=0.02, spurious_rate=2.2, dropout_rate=0.05),
    GenConfig(n_shelves=16, products_per_shelf=(5, 9), stack_prob=0.15,
              jitter_sigma=0.04, spurious_rate=2.2, dropout_rate=0.05),
)

MODES = ("without_foa", "with_foa")


@dataclass
class ExperimentConfig:
    settings: tuple = DEFAULT_SETTINGS
    trials: int = 10
    foa: str = "both"  # both | on | off
    tolerances: Tolerances = field(default_factory=Tolerances)
    rules_text: str | None = None
    foa_config: FoAConfig = field(default_factory=FoAConfig)
    master_seed: int = 1

    def check(self):
        if self.trials < 1:
            raise ConfigInvalid("trials must be >= 1")
        if not self.settings:
            raise ConfigInvalid("settings must be nonempty")
        if self.foa not in ("both", "on", "off"):
            raise ConfigInvalid(f"foa must be both/on/off, not {self.foa!r}")

    @property
    def modes(self):
        if self.foa == "both":
            return MODES
        return ("with_foa",) if self.foa == "on" else ("without_foa",)

    @classmethod
    def from_doc(cls, doc) -> "ExperimentConfig":
        try:
            kwargs = {}
            if "settings" in doc:
                kwargs["settings"] = tuple(
                    GenConfig.from_doc(s) for s in doc["settings"])
            for key in ("trials", "foa", "master_seed"):
                if key in doc:
                    kwargs[key] = doc[key]
            if "tolerances" in doc:
                kwargs["tolerances"] = Tolerances.from_doc(doc["tolerances"])
            if "rules" in doc:
                kwargs["rules_text"] = doc["rules"]
            if "foa_config" in doc:
                kwargs["foa_config"] = FoAConfig(
                    k=doc["foa_config"].get("K", 12),
                    seed_policy=doc["foa_config"].get("seed_policy",
                                                      "LargestContainer"))
            cfg = cls(**kwargs)
        except (TypeError, KeyError) as exc:
            raise ConfigInvalid(f"bad experiment config: {exc}") from exc
        cfg.check()
        return cfg

    def rules(self):
        if self.rules_text is None:
            return default_rules()
        return parse_rules(self.rules_text)


def derive_seed(master_seed: int, setting_idx: int, trial: int) -> int:
    """Stable 64-bit seed for one experiment cell."""
    payload = f"{master_seed}:{setting_idx}:{trial}".encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(),
                          "big")


def run_experiment(cfg: ExperimentConfig) -> dict:
    cfg.check()
    rules = cfg.rules()
    cells = {mode: [] for mode in cfg.modes}
    for s_idx, setting in enumerate(cfg.settings):
        for trial in range(cfg.trials):
            seed = derive_seed(cfg.master_seed, s_idx, trial)
            scene, gt = generate_scene(replace(setting, rng_seed=seed))
            for mode in cfg.modes:
                try:
                    labeling, _ = run(scene, cfg.tolerances, rules,
                                      cfg.foa_config, mode == "with_foa")
                except SceneKGError as exc:
                    raise type(exc)(
                        f"setting {s_idx} trial {trial} ({mode}): {exc}"
                    ) from exc
                metrics = score(labeling, gt)
                cells[mode].append({
                    "setting": s_idx,
                    "trial": trial,
                    "overall_accuracy": metrics.overall_accuracy,
                    "per_class": metrics.per_class,
                })
    report = {
        "master_seed": cfg.master_seed,
        "trials": cfg.trials,
        "settings": [s.to_doc() for s in cfg.settings],
        "modes": {},
    }
    for mode in cfg.modes:
        accs = [c["overall_accuracy"] for c in cells[mode]]
        per_class = {}
        for label in LABELS:
            per_class[label] = {
                metric: sum(c["per_class"][label][metric]
                            for c in cells[mode]) / len(cells[mode])
                for metric in ("precision", "recall", "f1")
            }
        report["modes"][mode] = {
            "overall_accuracy": {
                "mean": sum(accs) / len(accs),
                "min": min(accs),
                "max": max(accs),
            },
            "per_class": per_class,
            "cells": cells[mode],
        }
    return report


def dump_report(report: dict) -> bytes:
    return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode("utf-8")


def load_report(data: bytes) -> dict:
    try:
        return json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedDocument(f"not a report document: {exc}") from exc
