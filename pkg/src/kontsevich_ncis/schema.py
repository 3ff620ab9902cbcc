"""Schema definitions."""

import polars as pl

VERIFICATION_SCHEMA = pl.Schema(
    {
        "identity": pl.String(),
        "samples": pl.Int64(),
        "max_residual_terms": pl.Int64(),
        "seed": pl.Int64(),
        "elapsed": pl.Float64(),
        "passed": pl.Boolean(),
        "counterexample": pl.String(),
        "details": pl.String(),
    }
)

DRIFT_SCHEMA = pl.Schema(
    {
        "quantity": pl.String(),
        "time": pl.Float64(),
        "drift": pl.Float64(),
    }
)

SPAN_SCHEMA = pl.Schema(
    {
        "k": pl.Int64(),
        "exponent": pl.Int64(),
        "member": pl.Boolean(),
        "coordinates": pl.String(),
        "basis_size": pl.Int64(),
        "degree_bound": pl.Int64(),
        "trace_integral": pl.Boolean(),
    }
)

GENERATOR_TABLE_SCHEMA = pl.Schema(
    {
        "left": pl.String(),
        "right": pl.String(),
        "value": pl.String(),
    }
)
