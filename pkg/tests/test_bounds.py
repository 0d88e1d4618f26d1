"""Analytic-bound evaluations against hand-derivable values and the
published constants, in both nearest and outward-rounding modes."""

import math

import pytest

from sqfrep.bounds import (
    A_BASE,
    A_LARGE,
    A_R3,
    BoundParams,
    CThetaTable,
    CThetaTableError,
    DEFAULT_S_C,
    LOG_N_LARGE_REGIME,
    N_ANALYTIC_MIN,
    R3_LOWER,
    R_LOWER_BASE,
    R_LOWER_LARGE,
    RQ_LOWER,
    Regime,
    Scenario,
    artin_constant,
    artin_partial,
    bounds_report,
    brun_titchmarsh,
    check_lemma41,
    check_lemma42,
    ctheta_lookup,
    optimize_A,
    phi_square_sum,
    r3_lower_constant,
    ramare_tail,
    rn_error_budget,
    rn_lower_constant,
    rq_lower_constant,
    squarefree_coprime3_count,
    theta_progression_error_bound,
)

LOG_N_BASE = math.log(N_ANALYTIC_MIN)


# --- Artin constant -------------------------------------------------------------

def test_artin_constant_published_digits():
    assert artin_constant(1e-9) == pytest.approx(0.3739558136, abs=2e-9)


def test_artin_truncated_product():
    # direct product over {2, 3, 5, 7}
    expected = (1 - 1 / 2) * (1 - 1 / 6) * (1 - 1 / 20) * (1 - 1 / 42)
    assert artin_partial(10) == pytest.approx(expected, rel=1e-12)
    # the p <= 10 truncation sits within the crude 1/7 tail allowance
    assert abs(artin_partial(10) - artin_constant(1e-9)) < 1 / 7


def test_artin_eps_consistency():
    assert artin_constant(1e-3) == pytest.approx(artin_constant(1e-9), abs=1e-3)


def test_artin_eps_domain():
    with pytest.raises(ValueError):
        artin_constant(1e-13)


# --- Ramare tail and phi-square sums ---------------------------------------------

def test_ramare_tail_values():
    assert ramare_tail(10**5) == 4e-5
    assert ramare_tail(2) == 2.0
    with pytest.raises(ValueError):
        ramare_tail(1)


def test_ramare_tail_dominates_brute_sum():
    # direct summation over (1000, 1e6]; the remaining tail is positive,
    # so the partial sum must already sit below 4/Z
    partial = phi_square_sum(1000, 10**6)
    assert partial <= ramare_tail(1000)


def test_phi_square_sum_hand_value():
    # a in {1,2,3,5,6,7,10}: 1 + 1/2 + 1/6 + 1/20 + 1/12 + 1/42 + 1/40
    assert phi_square_sum(0, 10) == pytest.approx(1553 / 840, rel=1e-12)
    assert phi_square_sum(1, 1) == 0.0


def test_phi_square_sum_coprime_filter():
    unfiltered = phi_square_sum(0, 10)
    no_threes = phi_square_sum(0, 10, coprime_to=3)
    assert no_threes == pytest.approx(unfiltered - 1 / 6 - 1 / 12, rel=1e-12)


def test_phi_square_sum_paper_tail_bound():
    total = phi_square_sum(316, 10**5) + ramare_tail(10**5)
    assert total < 0.00322
    assert total == pytest.approx(0.0032107, abs=2e-6)


# --- Brun-Titchmarsh -------------------------------------------------------------

def test_brun_titchmarsh_formula():
    assert brun_titchmarsh(10**6, 3) == pytest.approx(
        2e6 / (2 * math.log(10**6 / 3)), rel=1e-12
    )
    with pytest.raises(ValueError):
        brun_titchmarsh(10, 10)
    value = brun_titchmarsh(11, 10)  # boundary: huge but finite
    assert math.isfinite(value) and value > 0


# --- c_theta table ---------------------------------------------------------------

def test_ctheta_fallbacks():
    assert ctheta_lookup(100) == (1 / 840, 8e9)
    c, x = ctheta_lookup(2 * 10**4)
    assert c == 1 / 160 and x == 8e9
    table = CThetaTable()
    assert table.lookup_log_x(2 * 10**5) == pytest.approx(
        0.03 * math.sqrt(2e5) * math.log(2e5) ** 3, rel=1e-12
    )
    assert table.lookup(2 * 10**5)[0] == 1 / 160


def _write_table(path, rows):
    with open(path, "w") as fh:
        fh.write("q,c_theta,x_theta\n")
        for q, c, x in rows:
            fh.write(f"{q},{c},{x}\n")


def test_ctheta_csv_roundtrip(tmp_path):
    path = tmp_path / "ctheta.csv"
    _write_table(path, [(3, 0.001, 4.81e9), (9, 0.0009, 4.81e9)])
    table = CThetaTable.from_csv(path)
    assert table.lookup(3) == (0.001, 4.81e9)
    assert table.lookup(5) == (1 / 840, 8e9)  # untabulated falls back


def test_ctheta_csv_rejects_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    _write_table(path, [(9, 0.001, 4.81e9), (3, 0.001, 4.81e9)])
    with pytest.raises(CThetaTableError):
        CThetaTable.from_csv(path)
    _write_table(path, [(3, 0.5, 4.81e9)])  # c above the fallback bound
    with pytest.raises(CThetaTableError):
        CThetaTable.from_csv(path)
    _write_table(path, [(2, 0.001, 4.81e9)])  # modulus below 3
    with pytest.raises(CThetaTableError):
        CThetaTable.from_csv(path)
    with open(path, "w") as fh:
        fh.write("a,b\n1,2\n")
    with pytest.raises(CThetaTableError):
        CThetaTable.from_csv(path)


def test_s_c_recompute_from_full_synthetic_table(tmp_path):
    from sqfrep.sieve import squarefree_bitmap

    flags = squarefree_bitmap(0, 317)
    rows = [(a * a, 0.001, 4.81e9) for a in range(2, 317) if flags[a]]
    path = tmp_path / "full.csv"
    _write_table(path, rows)
    table = CThetaTable.from_csv(path)
    expected = 0.001 * len(rows)
    assert table.recompute_s_c() == pytest.approx(expected, rel=1e-12)
    assert expected < DEFAULT_S_C


def test_s_c_recompute_requires_full_rows(tmp_path):
    path = tmp_path / "partial.csv"
    _write_table(path, [(4, 0.001, 4.81e9)])
    table = CThetaTable.from_csv(path)
    with pytest.raises(CThetaTableError):
        table.recompute_s_c()


# --- error budget ----------------------------------------------------------------

def test_budget_at_optimized_point():
    budget = rn_error_budget(N_ANALYTIC_MIN, BoundParams(A=A_BASE))
    assert 0.0535 < budget <= 0.05361
    assert budget == pytest.approx(0.0535563, abs=2e-6)


def test_budget_strict_mode_also_in_range():
    budget = rn_error_budget(N_ANALYTIC_MIN, BoundParams(A=A_BASE), strict=True)
    assert 0.0535 < budget <= 0.05361


def test_budget_worse_at_suboptimal_A():
    best = rn_error_budget(N_ANALYTIC_MIN, BoundParams(A=A_BASE))
    assert rn_error_budget(N_ANALYTIC_MIN, BoundParams(A=0.1)) > best


def test_budget_decreases_in_n():
    params = BoundParams(A=A_BASE)
    previous = None
    for exponent in range(9, 13):
        value = rn_error_budget(float(10**exponent), params)
        assert value > 0
        if previous is not None:
            assert value < previous
        previous = value


def test_budget_domain_errors():
    with pytest.raises(ValueError):
        BoundParams(A=0.7)
    with pytest.raises(ValueError):
        BoundParams(c=316, Z=317)
    with pytest.raises(ValueError):
        rn_error_budget(2.0)
    with pytest.raises(ValueError):
        rn_error_budget()


# --- lower-bound constants ---------------------------------------------------------

def test_rn_lower_base():
    outcome = rn_lower_constant(Regime.BASE)
    assert outcome.value >= R_LOWER_BASE
    assert outcome.value == pytest.approx(0.3203995, abs=2e-6)
    assert outcome.passed


def test_rn_lower_large():
    outcome = rn_lower_constant(Regime.LARGE)
    assert outcome.value >= R_LOWER_LARGE
    assert outcome.value == pytest.approx(0.3706825, abs=2e-6)


def test_rn_lower_strict():
    assert rn_lower_constant(Regime.BASE, strict=True).value >= R_LOWER_BASE
    assert rn_lower_constant(Regime.LARGE, strict=True).value >= R_LOWER_LARGE


def test_rn_lower_literal_reading_reported():
    # the rounded-subtrahend reading lands a hair below the published
    # constant; both readings are reported, the derived one passes
    literal = rn_lower_constant(Regime.BASE, reading="literal")
    assert literal.branch == "base-literal"
    assert literal.slack == pytest.approx(-1.42e-5, abs=2e-6)
    with pytest.raises(ValueError):
        rn_lower_constant(Regime.LARGE, reading="literal")


def test_rn_lower_base_near_optimal_in_A():
    base = rn_lower_constant(Regime.BASE).value
    artin = artin_constant(1e-9)
    for delta in (-0.01, 0.01):
        shifted = artin - rn_error_budget(
            N_ANALYTIC_MIN, BoundParams(A=A_BASE + delta)
        )
        assert shifted <= base + 1e-4


# --- optimizer -----------------------------------------------------------------------

def test_optimize_A_base_point():
    best = optimize_A(N_ANALYTIC_MIN)
    assert abs(best - A_BASE) <= 1e-3
    obj_best = rn_error_budget(N_ANALYTIC_MIN, BoundParams(A=best))
    obj_paper = rn_error_budget(N_ANALYTIC_MIN, BoundParams(A=A_BASE))
    assert abs(obj_best - obj_paper) <= 1e-5


def test_optimize_A_large_regime():
    best = optimize_A(log_n=LOG_N_LARGE_REGIME)
    assert abs(best - A_LARGE) <= 1e-4


def test_optimize_A_minimizer_property():
    tol = 1e-6
    best = optimize_A(N_ANALYTIC_MIN, tol=tol)
    obj = lambda A: rn_error_budget(N_ANALYTIC_MIN, BoundParams(A=A))
    assert obj(best) <= obj(best - 10 * tol) + 1e-12
    assert obj(best) <= obj(best + 10 * tol) + 1e-12


def test_optimize_A_tol_domain():
    with pytest.raises(ValueError):
        optimize_A(N_ANALYTIC_MIN, tol=1e-8)


# --- R_q constants --------------------------------------------------------------------

def test_rq_small_q_values():
    five = rq_lower_constant(5, N_ANALYTIC_MIN)
    assert five.branch == "tabulated-small-q"
    assert RQ_LOWER <= five.value <= RQ_LOWER + 1e-5
    thirteen = rq_lower_constant(13, N_ANALYTIC_MIN)
    assert thirteen.branch == "brun-titchmarsh"
    assert 0.12017 <= thirteen.value <= 0.12017 + 1e-5


def test_rq_large_q_small_n_branch():
    outcome = rq_lower_constant(100003, N_ANALYTIC_MIN)
    assert outcome.branch == "progression-count"
    assert 0.17523 <= outcome.value <= 0.17524


def test_rq_all_branches_meet_published():
    for q in (5, 7, 11, 13, 101, 9973, 99991, 100003, 15485863):
        outcome = rq_lower_constant(q, N_ANALYTIC_MIN)
        assert outcome.value >= RQ_LOWER, (q, outcome)
        assert rq_lower_constant(q, N_ANALYTIC_MIN, strict=True).value >= RQ_LOWER


def test_rq_degenerate_window_falls_back():
    # Brun-Titchmarsh needs n > q^2; above sqrt(n) the progression count
    # takes over instead of evaluating a negative window
    q = 69383  # prime just above sqrt(4.81e9)
    outcome = rq_lower_constant(q, N_ANALYTIC_MIN)
    assert outcome.branch == "progression-count"
    assert outcome.value >= 0.31


def test_rq_large_q_large_n_branch():
    q = 100003
    log_threshold = 0.03 * math.sqrt(q) * math.log(q) ** 3
    outcome = rq_lower_constant(q, log_n=log_threshold + 1)
    assert outcome.branch == "tabulated-large-q"
    assert outcome.value > 0.36


def test_rq_domain_errors():
    with pytest.raises(ValueError):
        rq_lower_constant(3, N_ANALYTIC_MIN)
    with pytest.raises(ValueError):
        rq_lower_constant(9, N_ANALYTIC_MIN)
    with pytest.raises(ValueError):
        rq_lower_constant(5, 1e9)


# --- R_3 constant ----------------------------------------------------------------------

def test_r3_at_published_A():
    value = r3_lower_constant(N_ANALYTIC_MIN, A_R3)
    assert value >= R3_LOWER
    assert value == pytest.approx(0.0906772, abs=2e-6)
    assert r3_lower_constant(N_ANALYTIC_MIN, A_R3, strict=True) >= R3_LOWER


def test_r3_squarefree_count_is_84():
    # brute force over a <= 182: square-free, not divisible by 3, 3a^2 <= 1e5
    def naive_squarefree(m):
        d = 2
        while d * d <= m:
            if m % (d * d) == 0:
                return False
            d += 1
        return True

    expected = sum(
        1 for a in range(1, 200) if 3 * a * a <= 10**5 and a % 3 and naive_squarefree(a)
    )
    assert expected == 84
    assert squarefree_coprime3_count() == 84


def test_r3_worse_at_suboptimal_A():
    assert r3_lower_constant(N_ANALYTIC_MIN, 0.1) < r3_lower_constant(N_ANALYTIC_MIN, A_R3)


def test_r3_domain():
    with pytest.raises(ValueError):
        r3_lower_constant(N_ANALYTIC_MIN, 0.6)
    with pytest.raises(ValueError):
        r3_lower_constant(1e6, A_R3)


# --- lemma 4.1 checker -----------------------------------------------------------------

def test_lemma41_case_i_at_29():
    outcome = check_lemma41(3, 29, N_ANALYTIC_MIN)
    assert outcome.branch == "case-i"
    assert outcome.passed
    assert outcome.value == pytest.approx(2.1553, abs=1e-3)


def test_lemma41_q2_23_fails_case_i():
    outcome = check_lemma41(3, 23, N_ANALYTIC_MIN)
    assert outcome.branch == "case-i"
    assert not outcome.passed


def test_lemma41_case_ii_small_n():
    outcome = check_lemma41(3, 10**7, N_ANALYTIC_MIN)
    assert outcome.branch == "case-ii-small-n"
    assert outcome.passed


def test_lemma41_crossover_both_branches():
    q2 = 10**7
    crossover = 0.09066 * q2
    small = check_lemma41(3, q2, log_n=crossover)
    assert small.branch == "case-ii-small-n" and small.passed
    large = check_lemma41(3, q2, log_n=crossover * (1 + 1e-12))
    assert large.branch == "case-ii-large-n" and large.passed
    strict_large = check_lemma41(3, q2, log_n=crossover * (1 + 1e-12), strict=True)
    assert strict_large.passed


def test_lemma41_domain():
    with pytest.raises(ValueError):
        check_lemma41(29, 3, N_ANALYTIC_MIN)
    with pytest.raises(ValueError):
        check_lemma41(3, 29, 1e6)
    with pytest.raises(ValueError):
        check_lemma41(3, 29)


# --- lemma 4.2 checker -----------------------------------------------------------------

def test_lemma42_passes_at_floor():
    for scenario in Scenario:
        outcome = check_lemma42(N_ANALYTIC_MIN, scenario)
        assert outcome.passed
        assert outcome.slack > 1e8  # enormous margin at the analytic floor
        assert check_lemma42(N_ANALYTIC_MIN, scenario, strict=True).passed


def test_lemma42_crossover_below_100():
    # bisect the smallest n where 0.32 n > log 2 + 2 log n starts holding
    lo, hi = 2.0, 100.0
    assert check_lemma42(lo, Scenario.K_DIVIDES_N).slack < 0
    assert check_lemma42(hi, Scenario.K_DIVIDES_N).slack > 0
    for _ in range(60):
        mid = (lo + hi) / 2
        if check_lemma42(mid, Scenario.K_DIVIDES_N).slack > 0:
            hi = mid
        else:
            lo = mid
    assert hi < 100


# --- progression error rule -------------------------------------------------------------

def test_theta_progression_error_bound_pieces():
    n = 5e9
    assert theta_progression_error_bound(n, 100) == pytest.approx(2.072 * math.sqrt(n))
    assert theta_progression_error_bound(n, 487) == pytest.approx(n / (160 * math.log(n)))
    n2 = 9e9
    assert theta_progression_error_bound(n2, 100) == pytest.approx(n2 / (160 * math.log(n2)))
    with pytest.raises(ValueError):
        theta_progression_error_bound(5e9, 2)
    with pytest.raises(ValueError):
        theta_progression_error_bound(1e6, 100)


# --- assembled report --------------------------------------------------------------------

def test_bounds_report_passes():
    report = bounds_report()
    assert report["all_passed"]
    assert report["assumptions"]  # fallback-only mode is surfaced
    strict = bounds_report(strict=True)
    assert strict["all_passed"]
