import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simon_coherence import (
    FunctionTableError,
    SimonFunction,
    Stage,
    bits_to_int,
    dot_mod2,
    format_function_table,
    hadamard_first_register,
    int_to_bits,
    measure_second_register,
    oracle_apply,
    parse_function_table,
    random_bijection,
    random_two_to_one,
    run_stages,
    second_register_distribution,
    validate_function,
)


def interference_expected(f: SimonFunction) -> np.ndarray:
    """Final-stage amplitudes built directly from the coset-sum expression."""
    n, size = f.n, 1 << f.n
    amps = np.zeros(size * size, dtype=complex)
    weight = 1.0 / 2 ** (n - 1)
    for x in f.coset_representatives():
        for y in range(size):
            if dot_mod2(y, f.s) == 0:
                amps[(y << n) | f(x)] += (-1) ** dot_mod2(x, y) * weight
    return amps


# ----------------------------------------------------------------- bit helpers


def test_bit_string_round_trip():
    assert bits_to_int("110") == 6
    assert int_to_bits(6, 3) == "110"
    assert bits_to_int("0001") == 1
    with pytest.raises(ValueError):
        bits_to_int("10a")
    with pytest.raises(ValueError):
        bits_to_int("")


def test_dot_mod2():
    assert dot_mod2(0b110, 0b101) == 1
    assert dot_mod2(0b110, 0b110) == 0
    assert dot_mod2(0, 0b111) == 0


# ------------------------------------------------------------------- functions


def test_simon_function_validates_shape():
    with pytest.raises(ValueError):
        SimonFunction(2, [0, 1, 2], 1)
    with pytest.raises(ValueError):
        SimonFunction(2, [0, 1, 2, 4], 1)
    with pytest.raises(ValueError):
        SimonFunction(2, [0, 1, 2, 3], 4)


def test_random_two_to_one_smallest_case():
    f = random_two_to_one(1, 1, seed=0)
    assert f(0) == f(1)
    ok, why = validate_function(f)
    assert ok and why is None


@pytest.mark.parametrize("n,s", [(2, 0b11), (3, 0b110), (4, 0b1001)])
def test_random_two_to_one_pairs_inputs(n, s):
    f = random_two_to_one(n, s, seed=42)
    size = 1 << n
    for x in range(size):
        assert f(x) == f(x ^ s)
    assert len({f(x) for x in range(size)}) == size // 2
    ok, _ = validate_function(f)
    assert ok


def test_random_two_to_one_is_deterministic():
    first = random_two_to_one(4, 0b0110, seed=9)
    second = random_two_to_one(4, 0b0110, seed=9)
    assert np.array_equal(first.table, second.table)
    other = random_two_to_one(4, 0b0110, seed=10)
    assert not np.array_equal(first.table, other.table)


def test_random_two_to_one_rejects_zero_mask_and_bad_n():
    with pytest.raises(ValueError):
        random_two_to_one(3, 0, seed=0)
    with pytest.raises(ValueError):
        random_two_to_one(0, 1, seed=0)
    with pytest.raises(ValueError):
        random_two_to_one(21, 1, seed=0)


def test_random_bijection_is_a_permutation():
    f = random_bijection(3, seed=5)
    assert f.s == 0
    assert sorted(f.table.tolist()) == list(range(8))
    ok, _ = validate_function(f)
    assert ok


def test_validate_function_examples(f_two_qubit, f_three_qubit):
    assert validate_function(f_two_qubit) == (True, None)
    assert validate_function(f_three_qubit) == (True, None)


def test_validate_function_reports_first_violating_pair(f_two_qubit):
    wrong_mask = SimonFunction(2, f_two_qubit.table, 0b01)
    ok, why = validate_function(wrong_mask)
    assert not ok
    assert "f(00)" in why and "f(01)" in why


def test_validate_function_catches_non_disjoint_images():
    collapsed = SimonFunction(2, [0, 0, 0, 0], 0b11)
    ok, why = validate_function(collapsed)
    assert not ok
    assert "xor" in why


def test_validate_function_catches_fake_bijection():
    f = SimonFunction(2, [0, 1, 1, 2], 0)
    ok, why = validate_function(f)
    assert not ok
    assert "bijective" in why


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_generated_oracles_always_validate(n, seed):
    rng = np.random.default_rng(seed)
    s = int(rng.integers(1, 1 << n))
    f = random_two_to_one(n, s, seed)
    assert validate_function(f) == (True, None)


# ---------------------------------------------------------------------- oracle


def test_oracle_apply_two_qubit_example(f_two_qubit):
    from simon_coherence import basis_state

    after_h = hadamard_first_register(basis_state(2, 2, 0))
    state = oracle_apply(after_h, f_two_qubit)
    expected = np.zeros(16)
    # (|00> + |11>)|00> / 2 + (|01> + |10>)|11> / 2
    expected[[0b0000, 0b1100]] = 0.5
    expected[[0b0111, 0b1011]] = 0.5
    assert np.abs(state.amps - expected).max() < 1e-12


def test_oracle_apply_three_qubit_example(f_three_qubit):
    from simon_coherence import basis_state

    after_h = hadamard_first_register(basis_state(3, 3, 0))
    state = oracle_apply(after_h, f_three_qubit)
    weight = 1.0 / (2.0 * math.sqrt(2.0))
    expected = np.zeros(64)
    for x in range(8):
        expected[(x << 3) | f_three_qubit(x)] = weight
    assert np.abs(state.amps - expected).max() < 1e-12


def test_oracle_apply_twice_is_identity(f_three_qubit):
    rng = np.random.default_rng(31)
    from simon_coherence import StateVector

    raw = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    psi = StateVector(3, 3, raw / np.linalg.norm(raw))
    twice = oracle_apply(oracle_apply(psi, f_three_qubit), f_three_qubit)
    assert np.abs(twice.amps - psi.amps).max() < 1e-12


def test_oracle_apply_preserves_magnitude_multiset(f_three_qubit):
    rng = np.random.default_rng(37)
    from simon_coherence import StateVector

    raw = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    psi = StateVector(3, 3, raw / np.linalg.norm(raw))
    moved = oracle_apply(psi, f_three_qubit)
    assert np.allclose(np.sort(np.abs(psi.amps)), np.sort(np.abs(moved.amps)))


def test_oracle_apply_rejects_register_mismatch(f_two_qubit):
    from simon_coherence import basis_state

    with pytest.raises(ValueError):
        oracle_apply(basis_state(3, 3, 0), f_two_qubit)


# ---------------------------------------------------------------------- stages


def test_run_stages_two_qubit_final_state(f_two_qubit):
    stages = run_stages(f_two_qubit)
    expected = np.zeros(16)
    # (|00> + |11>)|00> / 2 + (|00> - |11>)|11> / 2
    expected[0b0000] = 0.5
    expected[0b1100] = 0.5
    expected[0b0011] = 0.5
    expected[0b1111] = -0.5
    assert np.abs(stages[Stage.FINAL_HADAMARD].amps - expected).max() < 1e-12


def test_run_stages_three_qubit_final_state(f_three_qubit):
    stages = run_stages(f_three_qubit)
    quarter = 0.25
    signs = {
        0b101: {0b000: +1, 0b001: +1, 0b110: +1, 0b111: +1},
        0b110: {0b000: +1, 0b111: +1, 0b001: -1, 0b110: -1},
        0b010: {0b000: +1, 0b110: +1, 0b001: -1, 0b111: -1},
        0b000: {0b000: +1, 0b001: +1, 0b110: -1, 0b111: -1},
    }
    expected = np.zeros(64)
    for image, per_y in signs.items():
        for y, sign in per_y.items():
            expected[(y << 3) | image] = sign * quarter
    assert np.abs(stages[Stage.FINAL_HADAMARD].amps - expected).max() < 1e-12


def test_run_stages_initial_and_hadamard(f_three_qubit):
    stages = run_stages(f_three_qubit)
    assert stages[Stage.INITIAL].amps[0] == 1.0
    hadamard = stages[Stage.HADAMARD].amps.reshape(8, 8)
    assert np.allclose(hadamard[:, 0], 1.0 / (2.0 * math.sqrt(2.0)))
    assert np.abs(hadamard[:, 1:]).max() == 0.0


def test_final_stage_matches_coset_sum_reconstruction():
    rng = np.random.default_rng(3)
    for n in range(1, 6):
        for _ in range(3):
            s = int(rng.integers(1, 1 << n))
            f = random_two_to_one(n, s, int(rng.integers(2**31)))
            final = run_stages(f)[Stage.FINAL_HADAMARD]
            assert np.abs(final.amps - interference_expected(f)).max() < 1e-12


def test_final_stage_support_and_magnitude():
    for n, seed in ((2, 0), (3, 1), (4, 2), (5, 3)):
        s = (1 << n) - 1
        f = random_two_to_one(n, s, seed)
        final = run_stages(f)[Stage.FINAL_HADAMARD]
        mags = np.abs(final.amps)
        support = mags > 1e-12
        assert support.sum() == 4**n // 4
        assert np.allclose(mags[support], 2.0 / 2**n)


def test_run_stages_rejects_invalid_table():
    broken = SimonFunction(2, [0, 1, 2, 3], 0b11)
    with pytest.raises(ValueError):
        run_stages(broken)


# ----------------------------------------------------------------- measurement


def test_measurement_image_distribution_is_uniform(f_three_qubit):
    stages = run_stages(f_three_qubit)
    probs = second_register_distribution(stages[Stage.ORACLE])
    images = sorted({f_three_qubit(x) for x in range(8)})
    assert np.allclose(probs[images], 0.25)
    others = [z for z in range(8) if z not in images]
    assert np.abs(probs[others]).max() == 0.0


def test_measurement_collapses_to_input_pair(f_two_qubit):
    stages = run_stages(f_two_qubit)
    for seed in range(6):
        observed, collapsed = measure_second_register(stages[Stage.ORACLE], f_two_qubit, seed)
        assert observed in {f_two_qubit(x) for x in range(4)}
        pair = [x for x in range(4) if f_two_qubit(x) == observed]
        expected = np.zeros(16)
        for x in pair:
            expected[(x << 2) | observed] = 1.0 / math.sqrt(2.0)
        assert np.abs(collapsed.amps - expected).max() < 1e-12


def test_post_measure_state_matches_masked_transform(f_three_qubit):
    """H applied to the collapsed pair lands on the sign pattern (-1)^(x.y) over y.s=0."""
    stages = run_stages(f_three_qubit)
    for seed in range(4):
        observed, collapsed = measure_second_register(stages[Stage.ORACLE], f_three_qubit, seed)
        post = hadamard_first_register(collapsed)
        x = min(x for x in range(8) if f_three_qubit(x) == observed)
        expected = np.zeros(64)
        for y in range(8):
            if dot_mod2(y, f_three_qubit.s) == 0:
                expected[(y << 3) | observed] = (-1) ** dot_mod2(x, y) / 2.0
        assert np.abs(post.amps - expected).max() < 1e-12


def test_measurement_is_seed_deterministic(f_three_qubit):
    stages = run_stages(f_three_qubit)
    first = measure_second_register(stages[Stage.ORACLE], f_three_qubit, 123)
    second = measure_second_register(stages[Stage.ORACLE], f_three_qubit, 123)
    assert first[0] == second[0]
    assert np.array_equal(first[1].amps, second[1].amps)


def test_measurement_rejects_register_mismatch(f_two_qubit, f_three_qubit):
    stages = run_stages(f_three_qubit)
    with pytest.raises(ValueError):
        measure_second_register(stages[Stage.ORACLE], f_two_qubit, 0)


def test_measurement_on_bijection_collapses_to_single_input():
    f = random_bijection(2, seed=8)
    stages = run_stages(f)
    observed, collapsed = measure_second_register(stages[Stage.ORACLE], f, 1)
    mags = np.abs(collapsed.amps)
    assert (mags > 1e-12).sum() == 1
    assert observed == f(int(np.argmax(mags)) >> 2)


# -------------------------------------------------------------- function table


def test_function_table_round_trip(f_three_qubit):
    text = format_function_table(f_three_qubit)
    assert text.splitlines()[0] == "n=3 s=110"
    parsed = parse_function_table(text)
    assert parsed.n == 3 and parsed.s == 6
    assert np.array_equal(parsed.table, f_three_qubit.table)


def test_function_table_header_errors():
    with pytest.raises(FunctionTableError) as exc:
        parse_function_table("bogus header\n")
    assert exc.value.line == 1
    with pytest.raises(FunctionTableError):
        parse_function_table("n=2 s=111\n")  # mask width mismatch


def test_function_table_body_errors(f_two_qubit):
    text = format_function_table(f_two_qubit)
    lines = text.splitlines()
    swapped = "\n".join([lines[0], lines[2], lines[1], lines[3], lines[4]]) + "\n"
    with pytest.raises(FunctionTableError) as exc:
        parse_function_table(swapped)
    assert exc.value.line == 2
    truncated = "\n".join(lines[:3]) + "\n"
    with pytest.raises(FunctionTableError):
        parse_function_table(truncated)
    garbled = "\n".join([lines[0], "00 2x", *lines[2:]]) + "\n"
    with pytest.raises(FunctionTableError) as exc:
        parse_function_table(garbled)
    assert exc.value.line == 2


def test_function_table_rejects_inconsistent_mask(f_two_qubit):
    text = format_function_table(f_two_qubit).replace("s=11", "s=01")
    with pytest.raises(FunctionTableError):
        parse_function_table(text)
