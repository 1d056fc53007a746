"""Command-line entry point tying the pipeline together.

Exit codes: 0 success, 2 input error, 3 nonconvergence or guard trip.
All outputs are canonical and diff-stable.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from functools import wraps
from pathlib import Path

import click

from . import experiment as exp
from . import foa as foa_mod
from . import metrics as metrics_mod
from . import reasoner, render, scene as scene_mod, spatial
from .embed import (
    WalkConfig,
    dump_embedding,
    load_embedding,
    predict_links,
    train,
    walk_corpus,
)
from .errors import NonConvergence, SceneKGError
from .kg import KnowledgeGraph
from .rules import default_rules, parse_rules


def _guarded(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NonConvergence as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except (SceneKGError, OSError, json.JSONDecodeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
    return wrapper


@click.group()
def main():
    """Knowledge-graph scene reasoning toolkit."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True,
              path_type=Path), default=None, help="generator config JSON")
@click.option("--seed", type=int, default=None, help="overrides rng_seed")
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@click.option("--gt", "gt_path", type=click.Path(path_type=Path),
              required=True)
@_guarded
def gen(config_path, seed, out_path, gt_path):
    """Generate a synthetic scene and its ground truth."""
    if config_path is not None:
        cfg = scene_mod.GenConfig.from_doc(
            json.loads(config_path.read_text()))
    else:
        cfg = scene_mod.GenConfig()
    if seed is not None:
        cfg = replace(cfg, rng_seed=seed)
    scn, gt = scene_mod.generate_scene(cfg)
    out_path.write_bytes(scene_mod.dump_scene(scn))
    gt_path.write_bytes(scene_mod.dump_ground_truth(gt))


def _load_tol(tol_path):
    if tol_path is None:
        return spatial.Tolerances()
    return spatial.Tolerances.from_doc(json.loads(tol_path.read_text()))


@main.command()
@click.option("--scene", "scene_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--tol", "tol_path", type=click.Path(exists=True,
              path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@click.option("--premises", "premises_path",
              type=click.Path(path_type=Path), default=None)
@_guarded
def relations(scene_path, tol_path, out_path, premises_path):
    """Extract the L1 relation graph of a scene."""
    scn = scene_mod.load_scene(scene_path.read_bytes())
    graph = spatial.extract_relations(scn, _load_tol(tol_path))
    out_path.write_bytes(graph.serialize())
    if premises_path is not None:
        premises_path.write_text(spatial.to_premises(graph))


@main.command()
@click.option("--scene", "scene_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--foa", "use_foa", is_flag=True, default=False)
@click.option("--k", type=int, default=12, help="cover size cap")
@click.option("--rules", "rules_path", type=click.Path(exists=True,
              path_type=Path), default=None)
@click.option("--tol", "tol_path", type=click.Path(exists=True,
              path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@click.option("--stats", "stats_path", type=click.Path(path_type=Path),
              default=None)
@_guarded
def reason(scene_path, use_foa, k, rules_path, tol_path, out_path,
           stats_path):
    """Label every rect of a scene, with or without FoA covers."""
    scn = scene_mod.load_scene(scene_path.read_bytes())
    rules = (parse_rules(rules_path.read_text()) if rules_path
             else default_rules())
    labeling, stats = foa_mod.run(scn, _load_tol(tol_path), rules,
                                  foa_mod.FoAConfig(k=k), use_foa)
    out_path.write_bytes(reasoner.dump_labeling(labeling))
    if stats_path is not None:
        stats_path.write_bytes(stats.dump())


@main.command("eval")
@click.option("--pred", "pred_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--gt", "gt_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@_guarded
def eval_cmd(pred_path, gt_path, out_path):
    """Score a labeling against ground truth."""
    pred = reasoner.load_labeling(pred_path.read_bytes())
    gt = scene_mod.load_ground_truth(gt_path.read_bytes())
    out_path.write_bytes(metrics_mod.score(pred, gt).dump())


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True,
              path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@_guarded
def experiment(config_path, out_path):
    """Run the settings x trials experiment and write the report."""
    if config_path is not None:
        cfg = exp.ExperimentConfig.from_doc(
            json.loads(config_path.read_text()))
    else:
        cfg = exp.ExperimentConfig()
    out_path.write_bytes(exp.dump_report(exp.run_experiment(cfg)))


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--p", type=float, default=1.0)
@click.option("--q", type=float, default=1.0)
@click.option("--dim", type=int, default=2)
@click.option("--num-walks", type=int, default=10)
@click.option("--walk-length", type=int, default=20)
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@_guarded
def embed(graph_path, p, q, dim, num_walks, walk_length, seed, out_path):
    """Train node embeddings from biased random walks over a graph."""
    graph = KnowledgeGraph.deserialize(graph_path.read_bytes())
    corpus = walk_corpus(graph, WalkConfig(num_walks=num_walks,
                                           walk_length=walk_length,
                                           p=p, q=q, rng_seed=seed))
    space = train(corpus, dim=dim, rng_seed=seed)
    out_path.write_bytes(dump_embedding(space))


@main.command("predict-links")
@click.option("--emb", "emb_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--n1", required=True)
@click.option("--n2", required=True)
@click.option("--eps", type=float, required=True)
@click.option("--gamma", type=float, required=True)
@click.option("--max-eps", type=float, default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@_guarded
def predict_links_cmd(emb_path, n1, n2, eps, gamma, max_eps, out_path):
    """Report the epsilon-band members between two embedded nodes."""
    space = load_embedding(emb_path.read_bytes())
    report = predict_links(space, n1, n2, eps, gamma, max_eps)
    out_path.write_bytes(report.dump())


@main.command("render")
@click.option("--scene", "scene_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--labeling", "labeling_path", type=click.Path(exists=True,
              path_type=Path), required=True)
@click.option("--gt", "gt_path", type=click.Path(exists=True,
              path_type=Path), default=None)
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              required=True)
@_guarded
def render_cmd(scene_path, labeling_path, gt_path, out_path):
    """Render a labeled scene as an SVG document."""
    scn = scene_mod.load_scene(scene_path.read_bytes())
    labeling = reasoner.load_labeling(labeling_path.read_bytes())
    gt = (scene_mod.load_ground_truth(gt_path.read_bytes())
          if gt_path else None)
    out_path.write_bytes(render.render(scn, labeling, gt))


if __name__ == "__main__":
    main()
