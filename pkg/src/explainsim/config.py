"""JSON experiment documents: schema, parsing and canonical echo.

A document looks like::

    {
      "graph": {"kind": "complete", "n": 300},
      "overlap": {"n_k": 9, "placement": {"kind": "uniform"}},
      "prior": {"kind": "uniform"},
      "strategy": "uniform",
      "stopping": {"benefit": 1.0, "cost": {"kind": "constant", "c": 0.2}},
      "reps": 20000,
      "seed": 42,
      "output": {"dir": "out", "formats": ["csv"]},
      "verbosity": 0
    }

Unknown keys are rejected. Run ``explainsim schema`` for the full schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema

from .belief import CostFunction
from .errors import InvalidArgumentError
from .experiments import (
    ExperimentConfig,
    PointPrior,
    PriorSpec,
    TruncatedNormalPrior,
    UniformPrior,
)
from .graph import (
    Complete,
    ErdosRenyi,
    FarFromTarget,
    GraphSpec,
    OtherComponent,
    OverlapPlacement,
    SmallWorld,
    TwoComponent,
    UniformRandom,
)
from .search import SearchStrategy, StoppingRule


def _kind(name: str, props: dict, required: tuple[str, ...] = ()) -> dict:
    return {
        "type": "object",
        "additionalProperties": False,
        "required": ["kind", *required],
        "properties": {"kind": {"const": name}, **props},
    }


_INT_N = {"type": "integer", "minimum": 2}
_PROB = {"type": "number", "minimum": 0, "maximum": 1}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "explainsim experiment",
    "type": "object",
    "additionalProperties": False,
    "required": ["graph", "overlap"],
    "properties": {
        "graph": {"$ref": "#/$defs/graph"},
        "overlap": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_k"],
            "properties": {
                "n_k": {"type": "integer", "minimum": 1},
                "placement": {
                    "oneOf": [
                        _kind("uniform", {}),
                        _kind("far_from_target",
                              {"min_distance": {"type": "integer", "minimum": 1}},
                              ("min_distance",)),
                        _kind("other_component", {}),
                    ]
                },
            },
        },
        "prior": {
            "oneOf": [
                _kind("uniform", {}),
                _kind(
                    "truncated_normal",
                    {
                        "mean": {"type": "number"},
                        "variance": {"type": "number", "exclusiveMinimum": 0},
                        "m": {"type": "integer", "minimum": 1},
                    },
                    ("mean", "variance"),
                ),
                _kind("point", {"k": {"type": "integer", "minimum": 0}}, ("k",)),
            ]
        },
        "strategy": {"enum": [s.value for s in SearchStrategy]},
        "stopping": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["benefit", "cost"],
                    "properties": {
                        "benefit": {"type": "number", "minimum": 0},
                        "cost": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["kind", "c"],
                            "properties": {
                                "kind": {"enum": ["constant", "linear"]},
                                "c": {"type": "number", "minimum": 0},
                            },
                        },
                    },
                },
            ]
        },
        "reps": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dir": {"type": "string"},
                "formats": {
                    "type": "array",
                    "items": {"enum": ["csv", "svg"]},
                    "uniqueItems": True,
                },
                "episodes": {"type": "boolean"},
            },
        },
        "verbosity": {"type": "integer", "minimum": 0, "maximum": 2},
    },
    "$defs": {
        "graph": {
            "oneOf": [
                _kind("complete", {"n": _INT_N}, ("n",)),
                _kind("erdos_renyi", {"n": _INT_N, "p": _PROB}, ("n", "p")),
                _kind(
                    "small_world",
                    {"n": _INT_N, "k": {"type": "integer", "minimum": 2}, "beta": _PROB},
                    ("n", "k", "beta"),
                ),
                _kind(
                    "two_component",
                    {"a": {"$ref": "#/$defs/graph"}, "b": {"$ref": "#/$defs/graph"}},
                    ("a", "b"),
                ),
            ]
        }
    },
}


class ConfigError(InvalidArgumentError):
    """The document does not match the schema or describes an invalid experiment."""


@dataclass(frozen=True)
class CliConfig:
    experiment: ExperimentConfig
    out_dir: str | None = None
    formats: tuple[str, ...] = ("csv",)
    episodes: bool = True
    verbosity: int = 0


def graph_from_dict(d: dict) -> GraphSpec:
    kind = d["kind"]
    if kind == "complete":
        return Complete(d["n"])
    if kind == "erdos_renyi":
        return ErdosRenyi(d["n"], d["p"])
    if kind == "small_world":
        return SmallWorld(d["n"], d["k"], d["beta"])
    if kind == "two_component":
        return TwoComponent(graph_from_dict(d["a"]), graph_from_dict(d["b"]))
    raise ConfigError(f"unknown graph kind {kind!r}")


def graph_to_dict(spec: GraphSpec) -> dict:
    if isinstance(spec, Complete):
        return {"kind": "complete", "n": spec.n}
    if isinstance(spec, ErdosRenyi):
        return {"kind": "erdos_renyi", "n": spec.n, "p": spec.p}
    if isinstance(spec, SmallWorld):
        return {"kind": "small_world", "n": spec.n, "k": spec.k, "beta": spec.beta}
    return {"kind": "two_component", "a": graph_to_dict(spec.a), "b": graph_to_dict(spec.b)}


def _placement_from_dict(d: dict | None) -> OverlapPlacement:
    kind = (d or {"kind": "uniform"})["kind"]
    if kind == "uniform":
        return UniformRandom()
    if kind == "far_from_target":
        return FarFromTarget(d["min_distance"])
    return OtherComponent()


def _placement_to_dict(p: OverlapPlacement) -> dict:
    if isinstance(p, FarFromTarget):
        return {"kind": "far_from_target", "min_distance": p.min_distance}
    if isinstance(p, OtherComponent):
        return {"kind": "other_component"}
    return {"kind": "uniform"}


def _prior_from_dict(d: dict | None) -> PriorSpec:
    kind = (d or {"kind": "uniform"})["kind"]
    if kind == "uniform":
        return UniformPrior()
    if kind == "truncated_normal":
        return TruncatedNormalPrior(d["mean"], d["variance"], d.get("m"))
    return PointPrior(d["k"])


def _prior_to_dict(p: PriorSpec) -> dict:
    if isinstance(p, TruncatedNormalPrior):
        out = {"kind": "truncated_normal", "mean": p.mean, "variance": p.variance}
        if p.m is not None:
            out["m"] = p.m
        return out
    if isinstance(p, PointPrior):
        return {"kind": "point", "k": p.k}
    return {"kind": "uniform"}


def validate_document(doc: Any) -> None:
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None


def parse_config(doc: dict) -> CliConfig:
    """Validate ``doc`` against the schema and build the experiment."""
    validate_document(doc)
    stop = doc.get("stopping")
    try:
        exp = ExperimentConfig(
            graph=graph_from_dict(doc["graph"]),
            n_k=doc["overlap"]["n_k"],
            placement=_placement_from_dict(doc["overlap"].get("placement")),
            prior=_prior_from_dict(doc.get("prior")),
            strategy=SearchStrategy(doc.get("strategy", "uniform")),
            stopping=None if stop is None else StoppingRule(
                stop["benefit"], CostFunction(stop["cost"]["kind"], stop["cost"]["c"])
            ),
            reps=doc.get("reps", 1000),
            seed=doc.get("seed", 0),
        )
    except InvalidArgumentError as exc:
        raise ConfigError(str(exc)) from None
    out = doc.get("output", {})
    return CliConfig(
        experiment=exp,
        out_dir=out.get("dir"),
        formats=tuple(out.get("formats", ["csv"])),
        episodes=out.get("episodes", True),
        verbosity=doc.get("verbosity", 0),
    )


def load_config(path: str | Path) -> CliConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return parse_config(doc)


def experiment_to_dict(exp: ExperimentConfig) -> dict:
    """Canonical document for ``exp``; round-trips through :func:`parse_config`."""
    stop = None
    if exp.stopping is not None:
        stop = {
            "benefit": exp.stopping.benefit,
            "cost": {"kind": exp.stopping.cost.kind.value, "c": exp.stopping.cost.c},
        }
    return {
        "graph": graph_to_dict(exp.graph),
        "overlap": {"n_k": exp.n_k, "placement": _placement_to_dict(exp.placement)},
        "prior": _prior_to_dict(exp.prior),
        "strategy": exp.strategy.value,
        "stopping": stop,
        "reps": exp.reps,
        "seed": exp.seed,
    }
