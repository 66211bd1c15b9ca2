"""Covering numbers, chain factorizations and partition experiments on groups.

Every function builds an experiment config (the same JSON the ``covlab report``
command reads), runs it in the native core and returns the result as dicts.
Groups, elements and sets use the JSON shapes described in the README.
"""

import json

from ._core import CovlabError
from ._core import format_report as _format_report
from ._core import run_experiment as _run_experiment

__all__ = [
    "CovlabError",
    "run_experiment",
    "format_report",
    "cov",
    "factorize",
    "chi_cells",
    "separation_witness",
    "support_cells",
    "support_witness",
    "cov_per_cell",
    "phi",
    "tower",
]


def run_experiment(config, threads=1, seed=0, budget=0):
    """Run a config dict; returns {"rows": [...], "summary": ...}."""
    return json.loads(_run_experiment(json.dumps(config), threads, seed, budget))


def format_report(rows, fmt="csv"):
    """Render report rows as csv or json text, byte-identical to the CLI."""
    return _format_report(json.dumps(rows), fmt)


def _summary(config, **opts):
    return run_experiment(config, **opts)["summary"]


def cov(group, subset, method="exact", side="left", canonical=False, difference_set=False, **opts):
    return _summary(
        {
            "experiment": "cov",
            "group": group,
            "set": list(subset),
            "method": method,
            "side": side,
            "canonical": canonical,
            "difference_set": difference_set,
        },
        **opts,
    )


def _chain_config(op, group, chain, **extra):
    cfg = {"experiment": "theorem1", "op": op, "group": group, **extra}
    if chain is not None:
        cfg["chain"] = chain
    return cfg


def factorize(group, element, chain=None):
    return _summary(_chain_config("factorize", group, chain, element=element))


def chi_cells(group, chain=None, offsets=10, max_length=2):
    return _summary(_chain_config("cells", group, chain, offsets=offsets, max_length=max_length))


def separation_witness(group, k, s, chain=None, offsets=10):
    return _summary(_chain_config("witness", group, chain, K=list(k), s=list(s), offsets=offsets))


def support_cells(group, offsets=10, max_n=3):
    return _summary({"experiment": "theorem2", "op": "cells", "group": group, "offsets": offsets, "max_n": max_n})


def support_witness(group, k, n, offsets=10):
    return _summary(
        {"experiment": "theorem2", "op": "witness", "group": group, "K": list(k), "n": n, "offsets": offsets}
    )


def cov_per_cell(group, max_n=None, method="exact", **opts):
    cfg = {"experiment": "theorem2", "op": "cov-per-cell", "group": group, "method": method}
    if max_n is not None:
        cfg["max_n"] = max_n
    return _summary(cfg, **opts)


def phi(group, n, mode="exhaustive", iters=1000, **opts):
    return _summary({"experiment": "phi", "group": group, "n": n, "mode": mode, "iters": iters}, **opts)


def tower(factor, m_from, m_to, measure="theorem2", max_n=2, n=2, method="exact", **opts):
    """Rows of a sweep over factor^m for m in [m_from, m_to]."""
    return run_experiment(
        {
            "experiment": "tower",
            "factor": factor,
            "m": {"from": m_from, "to": m_to},
            "measure": measure,
            "max_n": max_n,
            "n": n,
            "method": method,
        },
        **opts,
    )["rows"]
