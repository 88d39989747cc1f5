"""Curvature certification of perfect-fluid and generalized Robertson-Walker metrics."""

import json

from . import _core
from ._core import GrwcertError, SchemaError, catalog_names, fluid_from_AB

__all__ = [
    "GrwcertError",
    "SchemaError",
    "catalog_names",
    "catalog_spec",
    "certify",
    "curvature",
    "fluid_decompose",
    "fluid_from_AB",
]


def _spec_text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def catalog_spec(name):
    """Spec document of a catalog entry, as a dict."""
    return json.loads(_core.catalog_spec(name))


def certify(spec, points=50, seed=1, hypothesis_tol=1e-7, conclusion_tol=1e-7,
            cluster_tol=1e-6, kappa=1.0, workers=1, checks=()):
    """Run the certification suite on a spec (dict or JSON text); returns the report dict."""
    text = _core.certify(_spec_text(spec), points=points, seed=seed,
                         hypothesis_tol=hypothesis_tol, conclusion_tol=conclusion_tol,
                         cluster_tol=cluster_tol, kappa=kappa, workers=workers,
                         checks=list(checks))
    return json.loads(text)


def curvature(spec, point):
    return _core.curvature(_spec_text(spec), list(point))


def fluid_decompose(spec, point, cluster_tol=1e-6):
    return _core.fluid_decompose(_spec_text(spec), list(point), cluster_tol)
