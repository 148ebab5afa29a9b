"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline, or
``python tests/test_acceptance.py`` for the summary alone.
"""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from qreading.channels import apply_bit, lossy_channel, readout_pair
from qreading.discrimination import (
    classical_lb_noiseless,
    classical_lb_noisy,
    helstrom,
    ln_classical_lb_noisy,
    mm_qcb_closed,
    per_copy_fidelity,
    qcb_numeric,
    qcb_pure,
    scenario_qcb,
)
from qreading.fock import Operator, fidelity_pure, mean_photon_number, trace_distance
from qreading.logprob import exp_probability
from qreading.metrics import info_retrieved
from qreading.scenario import ReadoutScenario
from qreading.states import (
    TransmitterSpec,
    coherent_state,
    fock_state,
    thermal_state,
    transmitter_cutoffs,
    transmitter_state,
)
from qreading.verification import verify

MM_PAIRS = [(1, 0), (2, 0), (2, 1), (3, 2), (4, 2), (5, 1), (6, 0)]
MM_NOISE = [1e-5, 0.1, 1.0, 1.5]
FIGURE_IDS = ["1a", "1b", "2a", "2b", "3a", "3b", "4"]


def report(number, title, ok, detail):
    line = f"criterion {number:>2} ({title}): {'PASS' if ok else 'FAIL'} | {detail}"
    print(line)
    return line


def criterion_1():
    t0 = time.perf_counter()
    worst, max_cut = 0.0, 0
    for m, mp_ in MM_PAIRS:
        for n_b in MM_NOISE:
            pair = readout_pair(TransmitterSpec.mandm(m, mp_), n_b)
            max_cut = max(max_cut, *pair.psi.space.dims)
            for M in (1, 2, 3):
                worst = max(worst, abs(mm_qcb_closed(m, mp_, n_b, M) - qcb_pure(pair.psi, pair.rho0, M)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 10.0 and max_cut <= 64
    return ok, f"84 cases, max ln gap {worst:.2e}, max cutoff {max_cut}, {elapsed:.2f} s"


def criterion_2():
    psi_spec, mm_spec = TransmitterSpec.photon_coherent(0.0), TransmitterSpec.mandm(1, 0)
    worst_td = worst_q = 0.0
    for n_b in (1e-5, 0.01, 0.1, 1.0):
        dims = tuple(
            max(a, b)
            for a, b in zip(transmitter_cutoffs(psi_spec, n_b), transmitter_cutoffs(mm_spec, n_b))
        )
        pairs = []
        for spec in (psi_spec, mm_spec):
            state = transmitter_state(spec, dims)
            pairs.append((apply_bit(state, 0, n_b), apply_bit(state, 1, n_b)))
        worst_td = max(worst_td, *(trace_distance(pairs[0][k], pairs[1][k]) for k in (0, 1)))
        worst_q = max(worst_q, abs(qcb_numeric(*pairs[0], 1) - qcb_numeric(*pairs[1], 1)))
    ok = worst_td < 1e-10 and worst_q < 1e-10
    return ok, f"max trace distance {worst_td:.2e}, max ln QCB gap {worst_q:.2e}"


_VERIFY = {}


def verify_once(tmp_dir: Path):
    if "result" not in _VERIFY:
        path = tmp_dir / "verify_report.txt"
        status, rep = verify(path)
        _VERIFY["result"] = (status, rep, path.read_text())
    return _VERIFY["result"]


def criterion_3(tmp_dir: Path):
    status, rep, text = verify_once(tmp_dir)
    table = rep.get("psi_printed_vs_fock_space_table")
    rows = [row.split() for row in table.table[1:]]
    combos = {(float(r[0]), float(r[1])) for r in rows}
    expected = {(n_s, n_b) for n_s in (0.5, 1.0, 5.0) for n_b in (0.0, 0.01, 0.1, 1.5)}
    zero = max(abs(float(r[4])) for r in rows if float(r[1]) == 0.0)
    nonzero = min(abs(float(r[4])) for r in rows if float(r[1]) > 0.0)
    ok = (
        combos == expected
        and zero <= 1e-9
        and "psi_printed_vs_fock_space_table" in text
        and table.status == "INFO"
    )
    return ok, (
        f"12-row table emitted, N_B=0 max gap {zero:.2e}, smallest N_B>0 gap {nonzero:.2e} "
        f"(reported only), verify exit {status}"
    )


def criterion_4():
    d, n_b = 18, 0.1
    states = [fock_state(0, d), fock_state(1, d), fock_state(3, d), coherent_state(0.8, d), coherent_state(0.6j, d)]
    thermal = thermal_state(n_b, d)
    id_gap = th_gap = att_gap = 0.0
    for psi in states:
        rho = Operator.projector(psi)
        id_gap = max(id_gap, trace_distance(lossy_channel(rho, 1.0, n_b), rho))
        th_gap = max(th_gap, trace_distance(lossy_channel(rho, 0.0, n_b), thermal))
        for r in (0.25, 0.5, 0.9):
            out = lossy_channel(rho, r, 0.0)
            att_gap = max(att_gap, abs(mean_photon_number(out) - r * mean_photon_number(rho)))
    ok = id_gap < 1e-12 and th_gap < 1e-12 and att_gap < 1e-9
    return ok, f"r=1 gap {id_gap:.2e}, r=0 thermal gap {th_gap:.2e}, attenuation gap {att_gap:.2e}"


def criterion_5():
    upper = lower = -math.inf
    for m, mp_ in MM_PAIRS:
        for n_b in MM_NOISE:
            pair = readout_pair(TransmitterSpec.mandm(m, mp_), n_b)
            p_h = helstrom(pair.rho0, pair.rho1)
            p_q = math.exp(qcb_pure(pair.psi, pair.rho0, 1))
            fid = fidelity_pure(pair.psi, pair.rho0)
            upper = max(upper, p_h - p_q)
            lower = max(lower, 0.5 * (1 - math.sqrt(1 - fid)) - p_h)
    ok = upper <= 1e-10 and lower <= 1e-10
    return ok, f"max(helstrom-QCB) {upper:.2e}, max(fidelity bound-helstrom) {lower:.2e}"


def criterion_6():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        M = int(rng.integers(1, 50))
        n_s = float(rng.uniform(0.01, 8.0))
        r0, r1 = (float(x) for x in rng.uniform(0, 1, 2))
        worst = max(worst, abs(classical_lb_noisy(M, n_s, 0.0, r0, r1) - classical_lb_noiseless(M, n_s, r0, r1)))
    halves = [classical_lb_noisy(M, 1.0, n_b, r, r) for M in (1, 9) for n_b in (0.0, 0.7) for r in (0.0, 0.5, 1.0)]
    halves += [classical_lb_noiseless(M, 1.0, r, r) for M in (1, 9) for r in (0.0, 0.5, 1.0)]
    ok = worst <= 1e-12 and all(h == 0.5 for h in halves)
    return ok, f"100-point grid max gap {worst:.2e}; r0=r1 exactly 1/2 in {len(halves)} cases"


def criterion_7():
    # time from cold caches so state construction is included
    readout_pair.cache_clear()
    per_copy_fidelity.cache_clear()
    t0 = time.perf_counter()
    specs = [TransmitterSpec.mandm(4, 2), TransmitterSpec.mandm(5, 1), TransmitterSpec.mandm(6, 0)]
    bad = []
    for M in range(1, 31):
        sc = ReadoutScenario(M, 3.0, 0.1)
        q = [scenario_qcb(sc, s) for s in specs]
        c = ln_classical_lb_noisy(M, 3.0, 0.1, 0.0, 1.0)
        if not (q[0] < q[1] < q[2] and q[2] > c):
            bad.append(M)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1.0
    return ok, f"ordering holds for M=1..30{'' if not bad else ' except ' + str(bad)}, {elapsed:.3f} s"


def criterion_8():
    spec = TransmitterSpec.mandm(1, 0)
    gains = []
    for M in range(1, 7):
        sc = ReadoutScenario(M, 0.5, 1e-5)
        gains.append(
            info_retrieved(scenario_qcb(sc, spec), log=True)
            - info_retrieved(ln_classical_lb_noisy(M, 0.5, 1e-5, 0.0, 1.0), log=True)
        )
    peak = max(gains)
    ok = gains[0] > 0 and 0.2 <= peak <= 0.35
    return ok, f"G(M=1) {gains[0]:.4f}, max G {peak:.4f} at M={gains.index(peak) + 1}"


def criterion_9(tmp_dir: Path):
    def figure(fig_id, out):
        subprocess.run(
            [sys.executable, "-m", "qreading", "figure", fig_id, "--out-dir", str(out)],
            check=True,
            capture_output=True,
        )

    figure("1a", tmp_dir / "run1")
    figure("1a", tmp_dir / "run2")
    same = (tmp_dir / "run1" / "1a.csv").read_bytes() == (tmp_dir / "run2" / "1a.csv").read_bytes()
    t0 = time.perf_counter()
    for fig_id in FIGURE_IDS:
        figure(fig_id, tmp_dir / "all")
    elapsed = time.perf_counter() - t0
    ok = same and elapsed < 30.0
    return ok, f"1a byte-identical: {same}; seven figure commands in {elapsed:.1f} s (fresh processes)"


def criterion_10():
    spec = TransmitterSpec.mandm(4, 2)
    ln_p = np.array([scenario_qcb(ReadoutScenario(M, 3.0, 0.1), spec) for M in range(1, 36)])
    finite = bool(np.all(np.isfinite(ln_p)))
    second = float(np.max(np.abs(np.diff(ln_p, 2))))
    silent = 0
    for v in ln_p:
        p, flagged = exp_probability(float(v))
        silent += p == 0.0 and not flagged
    log10_35 = ln_p[-1] / math.log(10)
    ok = finite and second < 1e-9 and silent == 0 and math.isfinite(log10_35)
    return ok, f"log10 P(M=35) {log10_35:.4f}, max second difference {second:.2e}, silent underflows {silent}"


CRITERIA = [
    (1, "oracle equivalence, M&M closed form", criterion_1, False),
    (2, "forced coincidence alpha=0", criterion_2, False),
    (3, "photon+coherent printed-form audit", criterion_3, True),
    (4, "channel endpoints", criterion_4, False),
    (5, "bound ordering", criterion_5, False),
    (6, "classical-bound consistency", criterion_6, False),
    (7, "fig 1b ordering", criterion_7, False),
    (8, "information gain magnitude", criterion_8, False),
    (9, "figure pipeline determinism", criterion_9, True),
    (10, "numerical-stability floor", criterion_10, False),
]


@pytest.mark.parametrize("number,title,fn,needs_dir", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, needs_dir, tmp_path_factory, capsys):
    ok, detail = fn(tmp_path_factory.mktemp(f"c{number}")) if needs_dir else fn()
    with capsys.disabled():
        print()
        report(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for number, title, fn, needs_dir in CRITERIA:
            ok, detail = fn(Path(tmp)) if needs_dir else fn()
            report(number, title, ok, detail)
            failed += not ok
    sys.exit(1 if failed else 0)
