"""Verification suites producing JSON-ready records.

Every record has ``entry``, ``check`` and ``pass``; anything else is detail.
Rationals are rendered as "num/den" strings.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np
from sympy import primerange

from quatks import elliptic
from quatks.catalog import CatalogEntry, CatalogError, format_rational, parse_entry
from quatks.kodaira_spencer import (
    MuMatrix,
    beta_residuals,
    closed_form_beta,
    psi_constant,
    solve_beta,
)
from quatks.orders import (
    MuNotFound,
    Order,
    check_star_stabilizes,
    is_maximal,
    reduced_discriminant,
    verify_order,
)
from quatks.padic import (
    ModuleKind,
    ODModule,
    SplitModule,
    Zp2Ring,
    det_image,
    hom_module,
    split_prime_check,
    twist_by_ad_mu,
)
from quatks.quat import (
    REAL,
    QuaternionError,
    candidate_primes,
    discriminant,
    hilbert_symbol,
    hilbert_symbol_bruteforce,
    is_indefinite,
    ramified_places,
)
from quatks.riemann import (
    check_positivity,
    covolume,
    dual_lattice_index,
    faltings_norm_sq_numeric,
    normalize_mu_sign,
    period_lattice,
    petersson_norm,
    real_embedding,
    riemann_gram,
)

Record = dict


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tol: float = 1e-9
    ks_tol: float = 1e-12
    samples: int = 1000
    tau_samples: int = 100
    N: int = 20
    re_box: tuple[float, float] = (-2.0, 2.0)
    im_box: tuple[float, float] = (0.1, 10.0)

    def __post_init__(self):
        if self.samples < 1 or self.tau_samples < 1:
            raise ValueError("sample counts must be positive")
        if self.N < 2:
            raise ValueError("p-adic precision N must be at least 2")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")

    def rng(self, key: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(key.encode())])

    def taus(self, rng: np.random.Generator) -> np.ndarray:
        re = rng.uniform(*self.re_box, size=self.tau_samples)
        im = rng.uniform(*self.im_box, size=self.tau_samples)
        return re + 1j * im


def _record(entry: str, check: str, ok: bool, **detail) -> Record:
    return {"entry": entry, "check": check, "pass": bool(ok), **detail}


def _place(v) -> str:
    return "inf" if v == REAL else str(v)


def discriminant_records(e: CatalogEntry) -> list[Record]:
    A = e.algebra()
    d = discriminant(A)
    local = {
        str(p): {"formula": hilbert_symbol(e.a, e.b, p), "bruteforce": hilbert_symbol_bruteforce(e.a, e.b, p, 3)}
        for p in candidate_primes(e.a, e.b)
    }
    agree = all(v["formula"] == v["bruteforce"] for v in local.values())
    return [_record(
        e.id, "discriminant", d == e.expected_d_B and agree,
        d_B=d, expected=e.expected_d_B, indefinite=is_indefinite(A),
        ramified=[_place(v) for v in ramified_places(A)], local_symbols=local,
    )]


def order_records(e: CatalogEntry, O: Order) -> list[Record]:
    out = []
    rd = reduced_discriminant(O)
    maximal = is_maximal(O)
    out.append(_record(
        e.id, "reduced_discriminant", maximal == e.maximal and (rd == e.expected_d_B) == e.maximal,
        value=rd, maximal=maximal, expected_maximal=e.maximal,
    ))
    idx = dual_lattice_index(O)
    out.append(_record(e.id, "dual_lattice_index", idx == rd * rd, value=idx, expected=rd * rd))
    return out


def archimedean_records(e: CatalogEntry, O: Order, cfg: RunConfig) -> list[Record]:
    out = []
    rng = cfg.rng(e.id)
    try:
        mu = e.mu(O)
    except (MuNotFound, QuaternionError, CatalogError) as exc:
        return [_record(e.id, "mu", False, error=str(exc))]
    sig = real_embedding(O.algebra)
    try:
        mu = normalize_mu_sign(O, mu, sig, 1j, cfg.samples, cfg.rng(e.id + "/sign"))
    except QuaternionError as exc:
        return [_record(e.id, "mu", False, error=str(exc))]
    d_B = mu.d_B
    out.append(_record(e.id, "mu", True, mu=[format_rational(x) for x in mu.mu.coords]))
    out.append(_record(e.id, "star_involution", check_star_stabilizes(O, mu)))

    try:
        G = riemann_gram(O, mu)
        out.append(_record(
            e.id, "riemann_gram", G.is_skew() and G.determinant == 1,
            gram=[list(r) for r in G.m], det=G.determinant, pfaffian=G.pfaffian(),
        ))
    except QuaternionError as exc:
        out.append(_record(e.id, "riemann_gram", False, error=str(exc)))

    taus = cfg.taus(rng)
    pos_tau = complex(taus[0])
    out.append(_record(
        e.id, "positivity", check_positivity(O, mu, sig, pos_tau, cfg.samples, rng),
        tau=[pos_tau.real, pos_tau.imag], samples=cfg.samples,
    ))

    cov_err, fal_err = 0.0, 0.0
    psi = psi_constant(MuMatrix.from_element(mu, sig), d_B)
    for t in taus:
        L = period_lattice(O, sig, complex(t))
        cov_err = max(cov_err, float(abs(covolume(L) / t.imag**2 - d_B) / d_B))
        lhs = faltings_norm_sq_numeric(L)
        rhs = psi.modulus * petersson_norm(complex(t)) ** 2
        fal_err = max(fal_err, abs(lhs - rhs) / rhs)
    out.append(_record(e.id, "covolume", cov_err < cfg.tol, max_rel_error=cov_err, taus=len(taus)))
    out.append(_record(
        e.id, "metric_identity", fal_err < cfg.tol,
        max_rel_error=fal_err, psi_numerator=psi.numerator, taus=len(taus),
    ))

    M = MuMatrix.from_element(mu, sig)
    b1, b2 = solve_beta(M)
    c1, c2 = closed_form_beta(M)
    res = max(np.abs(beta_residuals(M, b1, 1)).max(), np.abs(beta_residuals(M, b2, 2)).max())
    scale = max(1.0, np.abs(M.as_array()).max())
    neg = float(max(np.abs(b1 + c1).max(), np.abs(b2 + c2).max())) / scale
    out.append(_record(
        e.id, "ks_beta", res < cfg.ks_tol,
        max_residual=float(res), solve_vs_closed_form_sign=-1 if neg < cfg.ks_tol else None,
    ))
    return out


def padic_records(e: CatalogEntry, cfg: RunConfig) -> list[Record]:
    out = []
    for p in (p for p in candidate_primes(e.a, e.b) if e.expected_d_B % p == 0 and p != 2):
        out.extend(local_module_records(e.id, p, cfg.N))
    good = next(q for q in primerange(3, 100) if e.expected_d_B % q)
    rep = split_prime_check(SplitModule(good, cfg.N), d_B=e.expected_d_B, rng=cfg.rng(e.id + "/split"))
    out.append(_record(
        e.id, f"padic_split_p{good}", rep.ok,
        hom_rank=rep.hom_rank, det_valuation=rep.det_valuation, summand_ranks=list(rep.summand_ranks),
    ))
    return out


def local_module_records(entry: str, p: int, N: int) -> list[Record]:
    R = Zp2Ring(p, N)
    out = []
    mods = {k: ODModule.of_kind(k, R) for k in ModuleKind}
    twist_ok = all(twist_by_ad_mu(m).kind is not k for k, m in mods.items())
    for kT in ModuleKind:
        for kTp in ModuleKind:
            h = hom_module(mods[kTp], mods[kT])
            v = det_image(mods[kTp], mods[kT])
            expected = 0 if kT is kTp else 1
            out.append(_record(
                entry, f"padic_p{p}_{kTp.value}_to_{kT.value}", h.rank == 1 and v == expected and twist_ok,
                p=p, N=N, hom_rank=h.rank, det_valuation=v, expected_valuation=expected,
            ))
    return out


def elliptic_records(cfg: RunConfig) -> list[Record]:
    rng = cfg.rng("elliptic")
    worst = max(elliptic.metric_identity_elliptic(complex(t))[2] for t in cfg.taus(rng))
    return [
        _record("elliptic", "elliptic_metric", worst <= cfg.ks_tol, max_rel_error=worst,
                convention=elliptic.SIGN_CONVENTION),
        _record("elliptic", "elliptic_riemann", elliptic.e_riemann(1, 0, 0, 1) == 1, value=elliptic.e_riemann(1, 0, 0, 1)),
    ]


def entry_records(raw: dict, cfg: RunConfig) -> list[Record]:
    """All records for one raw catalog entry; parse and order failures become failing records."""
    try:
        e = parse_entry(raw)
    except CatalogError as exc:
        return [_record(exc.entry_id or "?", "parse", False, error=str(exc))]
    out = discriminant_records(e)
    A = e.algebra()
    try:
        report = verify_order(A, e.basis_elements())
    except QuaternionError as exc:
        return out + [_record(e.id, "order_axioms", False, error=str(exc))]
    failed = [k for k in ("contains_one", "closed", "trace_integral", "norm_integral") if not getattr(report, k)]
    out.append(_record(e.id, "order_axioms", report.ok, violated=failed))
    if not report.ok:
        return out
    O = e.order()
    try:
        out.extend(order_records(e, O))
    except QuaternionError as exc:
        return out + [_record(e.id, "reduced_discriminant", False, error=str(exc))]
    if e.maximal and is_maximal(O) and is_indefinite(A):
        out.extend(archimedean_records(e, O, cfg))
        out.extend(padic_records(e, cfg))
    return out


def sort_records(records: list[Record]) -> list[Record]:
    return sorted(records, key=lambda r: (r["entry"], r["check"]))


def run_all(raw_entries: list[dict], cfg: RunConfig,
            mapper: Optional[Callable[..., Iterator]] = None) -> list[Record]:
    mapper = mapper or map
    records = [r for chunk in mapper(entry_records, raw_entries, [cfg] * len(raw_entries)) for r in chunk]
    records.extend(elliptic_records(cfg))
    return sort_records(records)


def summary(records: list[Record]) -> dict:
    failed = [f"{r['entry']}:{r['check']}" for r in records if not r["pass"]]
    return {"summary": True, "total": len(records), "passed": len(records) - len(failed),
            "failed": failed, "pass": not failed}
