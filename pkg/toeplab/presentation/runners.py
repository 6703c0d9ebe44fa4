"""
Check runners.

Each run_* function takes a validated ExperimentConfig and returns a
CheckReport; run_checks executes the selected checks concurrently and
returns their reports in the fixed check order.
"""

from __future__ import annotations

import asyncio
import itertools
import logging
import time
from typing import Callable

import numpy as np

from toeplab import __version__
from toeplab.core.config import settings
from toeplab.core.rng import DeterministicRNG
from toeplab.domain.entities.bergman_space import BergmanSpace
from toeplab.domain.entities.operator_matrix import OperatorMatrix
from toeplab.domain.value_objects.multiindex import MultiIndex, block_degrees
from toeplab.domain.value_objects.symbols import (
    ConstantSymbol,
    QuasiHomogeneousSymbol,
    QuasiRadialSymbol,
)
from toeplab.schemas.experiment import SCHEMA_VERSION, ExperimentConfig
from toeplab.schemas.reports import (
    CheckReport,
    CommuteRecord,
    RunReport,
    SpectrumRow,
    Table,
    VerifyRecord,
)
from toeplab.services.geometry_service import GeometryService
from toeplab.services.oracle_service import OracleService
from toeplab.services.quadrature_service import QuadratureService
from toeplab.services.symbol_service import (
    SymbolService,
    balanced_monomials,
    in_class_Rkh,
    is_balanced,
    is_in_Tk,
    invariance_deviation,
    rkh_generators,
)
from toeplab.services.toeplitz_service import ToeplitzService, commutator_norm, predict_commutes

logger = logging.getLogger(__name__)

# stream offsets; Monte-Carlo batches use streams 0, 1, 2, ...
TORUS_STREAM = 1 << 40
GEOMETRY_STREAM = 1 << 41


def _label(index: int, sym: QuasiHomogeneousSymbol) -> str:
    return f"{index}:{sym.label()}"


def _primary_method(config: ExperimentConfig, radial: QuasiRadialSymbol) -> str:
    if config.method != "auto":
        return config.method
    return "closed_form" if radial.is_closed_form else "numeric"


def _spaces(config: ExperimentConfig) -> list[BergmanSpace]:
    return [BergmanSpace.of(config.n, m) for m in config.m]


def _assemble_all(
    toeplitz: ToeplitzService,
    config: ExperimentConfig,
    symbols: list[QuasiHomogeneousSymbol],
) -> dict[tuple[int, int], OperatorMatrix]:
    """Spectral matrices keyed by (symbol index, m)."""
    return {
        (index, space.m): toeplitz.assemble(sym, config.k, space)
        for space in _spaces(config)
        for index, sym in enumerate(symbols)
    }


# ==================== spectrum ====================


def run_spectrum(config: ExperimentConfig) -> CheckReport:
    """Table of gamma / gamma-tilde per basis element, on every configured path."""
    k, tol = config.k, config.tolerances
    quadrature = QuadratureService(config.quadrature)
    symbols = config.resolved_symbols()
    rows: list[SpectrumRow] = []
    primary_values: dict[tuple[int, int, tuple[int, ...]], complex] = {}
    path_diffs: list[float] = []

    for space in _spaces(config):
        for index, sym in enumerate(symbols):
            primary = _primary_method(config, sym.radial)
            methods = [primary]
            if config.spectrum.both_paths and sym.radial.is_closed_form and primary != "numeric":
                methods.append("numeric")
            by_method: dict[str, dict[MultiIndex, complex]] = {}
            for method in methods:
                toeplitz = ToeplitzService(quadrature, method)  # type: ignore[arg-type]
                coefficients = toeplitz.coefficients(sym, k, space)
                by_method[method] = {alpha: value for alpha, _, value in coefficients}
                rows.extend(
                    SpectrumRow(
                        m=space.m,
                        symbol=_label(index, sym),
                        alpha=str(alpha),
                        s=list(block_degrees(alpha, k)),
                        value_re=value.real,
                        value_im=value.imag,
                        method=method,
                    )
                    for alpha, _, value in coefficients
                )
            for alpha, value in by_method[primary].items():
                primary_values[(index, space.m, alpha.entries)] = value
            if len(methods) == 2:
                exact, numeric = by_method[primary], by_method["numeric"]
                path_diffs.append(
                    max(
                        (abs(exact[a] - numeric[a]) / max(abs(exact[a]), 1.0) for a in exact),
                        default=0.0,
                    )
                )

    targets = []
    for expected in config.spectrum.expected:
        value = primary_values.get((expected.symbol, expected.m, tuple(expected.alpha)))
        diff = float("inf") if value is None else abs(value - expected.value)
        targets.append(
            {
                "symbol": _label(expected.symbol, symbols[expected.symbol]),
                "m": expected.m,
                "alpha": expected.alpha,
                "expected": [expected.value.real, expected.value.imag],
                "value": None if value is None else [value.real, value.imag],
                "abs_diff": diff,
                "pass": diff <= tol.target,
            }
        )

    finite = all(np.isfinite(row.value_re) and np.isfinite(row.value_im) for row in rows)
    max_path_diff = max(path_diffs, default=0.0)
    passed = finite and max_path_diff <= tol.numeric and all(t["pass"] for t in targets)
    header = [
        "m",
        "symbol",
        "alpha",
        *[f"s{j + 1}" for j in range(k.l)],
        "value_re",
        "value_im",
        "method",
    ]
    return CheckReport(
        check="spectrum",
        passed=passed,
        summary={
            "rows": len(rows),
            "max_path_diff": max_path_diff,
            "targets": len(targets),
            "finite": finite,
        },
        records=targets,
        tables={"spectrum": Table(header=header, rows=[row.csv_row() for row in rows])},
    )


# ==================== assemble ====================


def run_assemble(config: ExperimentConfig) -> CheckReport:
    """Operator matrices of every symbol, T_1 = I, product and ratio identities."""
    k, tol = config.k, config.tolerances
    quadrature = QuadratureService(config.quadrature)
    toeplitz = ToeplitzService(quadrature, config.method)
    symbols = config.resolved_symbols()
    records: list[dict] = []
    tables: dict[str, Table] = {}
    failures: list[str] = []

    for space in _spaces(config):
        one_symbol = QuasiHomogeneousSymbol.quasi_radial(ConstantSymbol(), k.n)
        one = toeplitz.assemble(one_symbol, k, space)
        identity_diff = one.max_abs_diff(OperatorMatrix.identity(space))
        identity_tol = 0.0 if config.method != "numeric" else tol.numeric
        if identity_diff > identity_tol:
            failures.append(f"identity m={space.m}")
        records.append({"m": space.m, "symbol": one.label, "identity_diff": identity_diff})

        for index, sym in enumerate(symbols):
            matrix = toeplitz.assemble(sym, k, space)
            name = f"matrix_{index}_m{space.m}"
            csv_rows = matrix.to_csv_rows()
            tables[name] = Table(header=csv_rows[0], rows=csv_rows[1:])
            record: dict = {"m": space.m, "symbol": _label(index, sym), "matrix": matrix.to_dict()}

            if not sym.is_quasi_radial and is_balanced(sym.p, sym.q, k):
                defects = toeplitz.product_defects(sym, k, space)
                record["product_defects"] = defects
                if max(defects.values()) > tol.commute:
                    failures.append(f"product {name}")
                if sym.radial.is_closed_form and config.method != "numeric":
                    ratio = toeplitz.gamma_tilde_balanced
                    ratio_diff = max(
                        (
                            abs(value - ratio(sym.radial, k, sym.p, sym.q, space.m, alpha))
                            / max(abs(value), 1.0)
                            for alpha, _, value in toeplitz.coefficients(sym, k, space)
                        ),
                        default=0.0,
                    )
                    record["ratio_identity_diff"] = ratio_diff
                    if ratio_diff > tol.target:
                        failures.append(f"ratio {name}")
            records.append(record)

    return CheckReport(
        check="assemble",
        passed=not failures,
        summary={"matrices": len(tables), "failures": failures},
        records=records,
        tables=tables,
    )


# ==================== commute ====================


def _commute_records(
    config: ExperimentConfig,
    symbols: list[QuasiHomogeneousSymbol],
    labels: list[str],
) -> list[CommuteRecord]:
    k, tol = config.k, config.tolerances
    toeplitz = ToeplitzService(QuadratureService(config.quadrature), config.method)
    matrices = _assemble_all(toeplitz, config, symbols)
    records = []
    for i, j in itertools.combinations(range(len(symbols)), 2):
        sym1, sym2 = symbols[i], symbols[j]
        norms = {str(m): commutator_norm(matrices[(i, m)], matrices[(j, m)]) for m in config.m}
        measured = max(norms.values())
        predicted: bool | None = None
        passed: bool | None = None
        if is_balanced(sym1.p, sym1.q, k) and is_balanced(sym2.p, sym2.q, k):
            predicted = predict_commutes(sym1, sym2, k)
            passed = measured <= tol.commute if predicted else measured >= tol.separation_floor
        records.append(
            CommuteRecord(
                sym1=labels[i],
                sym2=labels[j],
                predicted=predicted,
                measured_norm=measured,
                norms_by_m=norms,
                passed=passed,
            )
        )
    return records


def run_commute(config: ExperimentConfig) -> CheckReport:
    """Pairwise commutator norms against the block-balance predictions.

    The measured norm of a pair is the largest over the configured weights.
    """
    tol = config.tolerances
    symbols = config.resolved_symbols()
    records = _commute_records(config, symbols, [_label(i, s) for i, s in enumerate(symbols)])

    sweep: list[CommuteRecord] = []
    if config.commute.sweep:
        battery = balanced_monomials(config.k, config.commute.sweep_max_entry)
        sweep = _commute_records(config, battery, [s.label() for s in battery])
        logger.info("Commutation sweep: %d symbols, %d pairs", len(battery), len(sweep))

    decided = [r for r in records + sweep if r.predicted is not None]
    unbalanced_separated = sum(
        1 for r in records if r.predicted is None and r.measured_norm >= tol.separation_floor
    )
    enough_separated = unbalanced_separated >= config.commute.min_unbalanced_separated
    passed = all(r.passed for r in decided) and enough_separated
    return CheckReport(
        check="commute",
        passed=passed,
        summary={
            "pairs": len(records),
            "sweep_pairs": len(sweep),
            "predicted_pairs": len(decided),
            "predicted_passed": sum(1 for r in decided if r.passed),
            "unbalanced_pairs": sum(1 for r in records if r.predicted is None),
            "unbalanced_separated": unbalanced_separated,
        },
        records=[r.model_dump(by_alias=True) for r in records + sweep],
    )


# ==================== oracle ====================


def _entry_records(
    config: ExperimentConfig,
    oracle: OracleService,
    spectral: OperatorMatrix,
    sym: QuasiHomogeneousSymbol,
    label: str,
    method: str,
) -> list[VerifyRecord]:
    space, tol = spectral.space, config.tolerances
    cfg = config.mc.model_copy(update={"method": method})
    records = []
    for pair in config.oracle.entries:
        alpha, beta = MultiIndex(entries=tuple(pair.alpha)), MultiIndex(entries=tuple(pair.beta))
        if alpha.degree > space.m or beta.degree > space.m:
            continue
        row, col = space.index(beta), space.index(alpha)
        scale = float(np.sqrt(space.norm_consts[row] * space.norm_consts[col]))
        direct = oracle.inner_product_direct(sym, alpha, beta, space, config.k, cfg)
        diff = abs(spectral.entries[row, col] - direct.value / scale)
        stderr = direct.stderr / scale
        if method == "separated" or stderr == 0:
            passed, sigma = diff <= tol.oracle, None
        else:
            sigma = diff / stderr
            passed = sigma <= tol.mc_sigma
        records.append(
            VerifyRecord(
                space=f"{space!r}[{beta},{alpha}]",
                symbol=label,
                method=method,
                max_abs_diff=diff,
                mean_abs_diff=diff,
                stderr=stderr,
                seed=cfg.seed,
                samples=direct.samples,
                max_sigma=sigma,
                passed=passed,
            )
        )
    return records


def run_verify(config: ExperimentConfig) -> CheckReport:
    """Spectral matrices against the direct oracle, plus reproducing checks."""
    k, tol = config.k, config.tolerances
    quadrature = QuadratureService(config.quadrature)
    toeplitz = ToeplitzService(quadrature, config.method)
    oracle = OracleService(quadrature)
    symbols = config.resolved_symbols()
    matrices = _assemble_all(toeplitz, config, symbols)
    records: list[VerifyRecord] = []

    for (index, m), spectral in matrices.items():
        sym, label = symbols[index], _label(index, symbols[index])
        for method in config.oracle.methods:
            if config.oracle.entries:
                records.extend(_entry_records(config, oracle, spectral, sym, label, method))
                continue
            cfg = config.mc.model_copy(update={"method": method})
            report = oracle.compare(spectral, sym, k, cfg)
            if method == "separated":
                passed = float(report["max_abs_diff"]) <= tol.oracle
            else:
                passed = float(report["max_sigma"]) <= tol.mc_sigma
            records.append(
                VerifyRecord(
                    space=repr(spectral.space),
                    symbol=label,
                    passed=passed,
                    **report,  # type: ignore[arg-type]
                )
            )

    reproducing = []
    for entries in config.oracle.reproducing:
        alpha = MultiIndex(entries=tuple(entries))
        for space in _spaces(config):
            if alpha.degree > space.m:
                continue
            for method in config.oracle.methods:
                cfg = config.mc.model_copy(update={"method": method})
                deviation, stderr = oracle.reproducing_check(alpha, space, cfg)
                deterministic = method == "separated" or stderr == 0
                bound = tol.oracle if deterministic else tol.mc_sigma * stderr
                reproducing.append(
                    {
                        "space": repr(space),
                        "alpha": entries,
                        "method": method,
                        "deviation": deviation,
                        "stderr": stderr,
                        "pass": deviation <= bound,
                    }
                )

    passed = all(r.passed for r in records) and all(r["pass"] for r in reproducing)
    return CheckReport(
        check="oracle",
        passed=passed,
        summary={
            "comparisons": len(records),
            "max_abs_diff": max((r.max_abs_diff for r in records), default=0.0),
            "reproducing_checks": len(reproducing),
            "seed": config.mc.seed,
        },
        records=[r.model_dump() for r in records] + reproducing,
    )


# ==================== rkh-algebra ====================


def run_rkh_algebra(config: ExperimentConfig) -> CheckReport:
    """Commutativity of the R_k(h) generator battery and the torus characterization."""
    k, tol, options = config.k, config.tolerances, config.rkh
    cls = config.rkh_class()
    generators = rkh_generators(cls, options.generators, options.max_degree)
    outside_class = [g.label() for g in generators if not in_class_Rkh(g, cls)]
    toeplitz = ToeplitzService(QuadratureService(config.quadrature), config.method)

    per_m = []
    for space in _spaces(config):
        matrices = [toeplitz.assemble(g, k, space) for g in generators]
        worst = max(commutator_norm(a, b) for a, b in itertools.combinations(matrices, 2))
        per_m.append({"m": space.m, "generators": len(generators), "max_commutator_norm": worst})

    torus: dict[str, float | int] = {"samples": options.torus_samples}
    torus_ok = True
    if options.torus_samples:
        symbol_service = SymbolService(tol.geometry)
        rng = DeterministicRNG(config.mc.seed, config.mc.algorithm).stream(TORUS_STREAM)
        points = symbol_service.sample_vk(k, options.torus_points, rng)
        inside = 0.0
        worst_ratio = np.inf
        for _ in range(options.torus_samples):
            t = symbol_service.random_tk(k, rng)
            torus_ok &= is_in_Tk(t, k)
            inside = max(inside, symbol_service.max_deviation(generators, t, k, points))
            outside = symbol_service.random_outside_tk(k, rng)
            torus_ok &= not is_in_Tk(outside, k)
            witness, gap = symbol_service.witness_for(outside, cls)
            worst_ratio = min(worst_ratio, invariance_deviation(witness, outside, k, points) / gap)
        torus.update({"inside_max_deviation": inside, "witness_min_ratio": float(worst_ratio)})
        torus_ok = torus_ok and inside <= tol.geometry and worst_ratio >= 0.1

    passed = (
        not outside_class
        and len(generators) >= 2
        and all(r["max_commutator_norm"] <= tol.commute for r in per_m)
        and torus_ok
    )
    return CheckReport(
        check="rkh-algebra",
        passed=bool(passed),
        summary={
            "k": list(k.parts),
            "h": list(cls.h),
            "generators": [g.label() for g in generators],
            "outside_class": outside_class,
            "torus": torus,
        },
        records=per_m,
    )


# ==================== geometry ====================

GEOMETRY_THRESHOLDS: dict[str, str] = {
    "lagrangian_deviation": "geometry",
    "frame_orthogonality": "geometry",
    "bracket_fd": "bracket",
    "ak_invariance": "geometry",
    "bk_equivariance": "geometry",
    "isometry_deviation": "geometry",
    "ak_recomposition": "recomposition",
    "fiber_tangency": "bracket",
    "frame_transport": "geometry",
}


def run_geometry(config: ExperimentConfig) -> CheckReport:
    """Geometry suite in every configured ambient."""
    k, tol, options = config.k, config.tolerances, config.geometry
    service = GeometryService(options.eps)
    rng = DeterministicRNG(config.mc.seed, config.mc.algorithm)
    records = []
    failures = []
    for offset, ambient in enumerate(options.ambients):
        report = service.run_suite(k, ambient, options.points, rng.stream(GEOMETRY_STREAM + offset))
        for name, threshold in GEOMETRY_THRESHOLDS.items():
            if float(report[name]) > getattr(tol, threshold):
                failures.append(f"{ambient.value}:{name}")
        if not float(report["min_freeness_gap"]) > 0:
            failures.append(f"{ambient.value}:min_freeness_gap")
        records.append(report)
    return CheckReport(
        check="geometry",
        passed=not failures,
        summary={"k": list(k.parts), "points": options.points, "failures": failures},
        records=records,
    )


# ==================== normalization ====================


def run_normalization(config: ExperimentConfig) -> CheckReport:
    """int dnu_m = 1 by both quadrature paths and by Monte-Carlo."""
    tol, options = config.tolerances, config.normalization
    quadrature = QuadratureService(config.quadrature)
    oracle = OracleService(quadrature)
    cfg = config.mc.model_copy(update={"method": "montecarlo"})
    records = []
    for n, m in itertools.product(options.n_values, options.m_values):
        closed = quadrature.fs_normalization(n, m, "closed_form")
        numeric = quadrature.fs_normalization(n, m, "numeric")
        record: dict = {
            "n": n,
            "m": m,
            "closed_form": closed,
            "numeric": numeric,
            "pass": abs(closed - 1.0) <= tol.target and abs(numeric - 1.0) <= tol.target,
        }
        if options.montecarlo:
            estimate = oracle.normalization_mc(n, m, cfg)
            deviation = abs(estimate.value - 1.0)
            record.update(
                {
                    "montecarlo": estimate.value.real,
                    "stderr": estimate.stderr,
                    "samples": estimate.samples,
                    "mc_pass": deviation <= max(tol.mc_sigma * estimate.stderr, tol.target),
                }
            )
            record["pass"] = record["pass"] and record["mc_pass"]
        records.append(record)
    return CheckReport(
        check="normalization",
        passed=all(r["pass"] for r in records),
        summary={"spaces": len(records), "seed": cfg.seed, "samples": cfg.sample_count},
        records=records,
    )


# ==================== orchestration ====================

RUNNERS: dict[str, Callable[[ExperimentConfig], CheckReport]] = {
    "spectrum": run_spectrum,
    "assemble": run_assemble,
    "commute": run_commute,
    "oracle": run_verify,
    "geometry": run_geometry,
    "rkh-algebra": run_rkh_algebra,
    "normalization": run_normalization,
}


async def _run_one(name: str, config: ExperimentConfig, limit: asyncio.Semaphore) -> CheckReport:
    async with limit:
        started = time.perf_counter()
        logger.info("Check %s started", name)
        report = await asyncio.to_thread(RUNNERS[name], config)
        logger.info(
            "Check %s finished in %.2fs: %s",
            name,
            time.perf_counter() - started,
            "pass" if report.passed else "FAIL",
        )
        return report


async def run_checks(config: ExperimentConfig, max_workers: int | None = None) -> list[CheckReport]:
    """Run the selected checks concurrently; reports come back in check order."""
    limit = asyncio.Semaphore(max_workers or settings.MAX_WORKERS)
    return list(await asyncio.gather(*(_run_one(name, config, limit) for name in config.checks)))


def build_report(config: ExperimentConfig, checks: list[CheckReport]) -> RunReport:
    return RunReport(
        tool=settings.APP_NAME,
        version=__version__,
        schema_version=SCHEMA_VERSION,
        config=config.model_dump(mode="json"),
        rng=DeterministicRNG(config.mc.seed, config.mc.algorithm).metadata(),
        checks=checks,
        passed=all(check.passed for check in checks),
    )
