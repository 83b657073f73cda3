import pytest
from hypothesis import given, settings, strategies as st

from ultragh import (
    Correspondence,
    ExactValue,
    associated_correspondence,
    distortion,
    equilibrium_table,
    full_product,
    glue_along_strong_correspondence,
    glue_with_constant_bridge,
    hausdorff_distance,
    is_correspondence,
    is_strong_correspondence,
    min_distortion_correspondence,
    min_distortion_strong_correspondence,
    random_ultrametric,
    validate_space,
)
from ultragh.errors import (
    BridgeTooSmallError,
    NotACorrespondenceError,
    NotStrongError,
    NotSurjectiveError,
)

from conftest import ev
from oracles import (
    naive_correspondence_minima,
    naive_lex_min_witness,
    strong_existential,
)

POOL = [ExactValue(1, 4), ExactValue(1, 2), ExactValue(1), ExactValue(2)]


def relabeled_copy(space):
    return validate_space(
        [[space.dist(i, j) for j in range(len(space))] for i in range(len(space))],
        [f"c{i}" for i in range(len(space))],
    )


def identity_correspondence(x, y):
    return Correspondence(x, y, tuple((i, i) for i in range(len(x))))


def test_is_correspondence(x2, x3):
    assert is_correspondence(x2, x3, [(i, j) for i in range(2) for j in range(3)])
    assert not is_correspondence(x2, x3, [(0, 0)])
    assert is_correspondence(x2, x3, [(0, 0), (1, 1), (1, 2)])
    with pytest.raises(NotACorrespondenceError):
        Correspondence(x2, x3, ((0, 0),))


def test_distortion_examples(x2, x3, ydelta):
    assert distortion(identity_correspondence(x3, relabeled_copy(x3))) == ev(0)
    assert distortion(full_product(x2, x3)) == ev(1)
    c = Correspondence(x3, ydelta, ((0, 0), (1, 1), (2, 2)))
    # brute force over the nine pair-of-pairs gives exactly 1/2
    worst = max(
        x3.dist(i, k).abs_diff(ydelta.dist(j, l))
        for (i, j) in c.pairs
        for (k, l) in c.pairs
    )
    assert worst == ev("1/2")
    assert distortion(c) == ev("1/2")


def test_associated_correspondence(x2, x3, z4, singleton):
    ident = associated_correspondence(x3, relabeled_copy(x3), [0, 1, 2])
    assert distortion(ident) == ev(0)
    const = associated_correspondence(x2, singleton, [0, 0])
    assert const.pairs == ((0, 0), (1, 0))
    assert distortion(const) == ev(1)
    reduction = associated_correspondence(z4, x2, [0, 1, 0, 1])
    assert reduction.pairs == ((0, 0), (1, 1), (2, 0), (3, 1))
    assert distortion(reduction) == ev("1/2")
    with pytest.raises(NotSurjectiveError):
        associated_correspondence(x3, x2, [0, 0, 0])


def test_strongness_examples(x2, x3, ydelta):
    assert is_strong_correspondence(full_product(x2, x3)).is_strong

    verdict = is_strong_correspondence(
        Correspondence(x3, ydelta, ((0, 0), (1, 1), (2, 2)))
    )
    assert not verdict.is_strong
    ce = verdict.counterexample
    assert (ce.x, ce.y) == (0, 2)  # the pair (x = 0, y = t)
    assert {ce.left_distance, ce.right_distance} == {ev(1), ev("3/2")}
    assert ce.reason == "unequal"

    copy = relabeled_copy(x3)
    verdict = is_strong_correspondence(identity_correspondence(x3, copy))
    assert verdict.is_strong and verdict.distortion == ev(0)


def test_equilibrium_examples(x2, x3):
    table = equilibrium_table(full_product(x2, x3))
    assert table.entries == {} and table.inf_value is None

    copy = relabeled_copy(x3)
    table = equilibrium_table(identity_correspondence(x3, copy))
    assert table.entries[(0, 1)] == ev(1)
    assert set(table.entries.values()) == {ev(1)}
    assert table.inf_value == table.sup_value == ev(1)
    assert table.distortion < table.inf_value <= table.min_diameter

    with pytest.raises(NotStrongError):
        equilibrium_table(Correspondence(x2, x3, ((0, 0), (1, 1), (1, 2))))


def test_glue_full_product(x2, x3):
    result = glue_along_strong_correspondence(full_product(x2, x3))
    assert len(result.glued_space) == 5
    assert not result.quotient_applied
    assert result.r0 == ev(1)
    for i in range(2):
        for j in range(3):
            assert result.glued_space.dist(
                result.left_embedding[i], result.right_embedding[j]
            ) == ev(1)
    images = hausdorff_distance(
        result.glued_space, result.left_embedding, result.right_embedding
    )
    assert images == ev(1)


def test_glue_quotient(x3):
    copy = relabeled_copy(x3)
    result = glue_along_strong_correspondence(identity_correspondence(x3, copy))
    assert result.quotient_applied
    assert len(result.glued_space) == 3
    assert result.left_embedding == result.right_embedding


def test_glue_preserves_distances(x2, x3):
    result = glue_along_strong_correspondence(full_product(x2, x3))
    for i in range(2):
        for j in range(2):
            assert result.glued_space.dist(
                result.left_embedding[i], result.left_embedding[j]
            ) == x2.dist(i, j)
    for i in range(3):
        for j in range(3):
            assert result.glued_space.dist(
                result.right_embedding[i], result.right_embedding[j]
            ) == x3.dist(i, j)


def test_constant_bridge(x2, x3, singleton):
    result = glue_with_constant_bridge(x2, x3, ev(1))
    assert len(result.glued_space) == 5
    assert hausdorff_distance(
        result.glued_space, result.left_embedding, result.right_embedding
    ) == ev(1)

    hooked = glue_with_constant_bridge(x3, singleton, x3.diameter())
    assert hausdorff_distance(
        hooked.glued_space, hooked.left_embedding, hooked.right_embedding
    ) == x3.diameter()

    with pytest.raises(BridgeTooSmallError):
        glue_with_constant_bridge(x2, x3, ev("1/2"))


def test_min_distortion_identity(x3):
    res = min_distortion_correspondence(x3, x3)
    assert res.distortion == ev(0) and res.optimal
    assert res.correspondence.pairs == ((0, 0), (1, 1), (2, 2))


def test_min_distortion_x2_x3(x2, x3):
    res = min_distortion_correspondence(x2, x3)
    assert res.distortion == ev(1)
    naive_plain, naive_strong = naive_correspondence_minima(x2, x3)
    assert res.distortion.fraction == naive_plain
    strong = min_distortion_strong_correspondence(x2, x3)
    assert strong.distortion == ev(1)
    assert strong.distortion.fraction == naive_strong
    assert strong.correspondence.pairs == full_product(x2, x3).pairs


def test_min_distortion_x3_ydelta(x3, ydelta):
    res = min_distortion_correspondence(x3, ydelta)
    assert res.distortion == ev("1/2")
    assert res.correspondence.pairs == ((0, 0), (1, 1), (2, 2))
    strong = min_distortion_strong_correspondence(x3, ydelta)
    assert strong.distortion == ev("3/2")


def test_strong_identity_witness(x3):
    res = min_distortion_strong_correspondence(x3, x3)
    assert res.distortion == ev(0)
    assert res.correspondence.pairs == ((0, 0), (1, 1), (2, 2))
    verdict = is_strong_correspondence(res.correspondence)
    assert verdict.is_strong


@settings(max_examples=25, deadline=None)
@given(
    st.integers(1, 4), st.integers(1, 4), st.integers(0, 5_000), st.integers(0, 5_000)
)
def test_graph_distortion_equals_map_distortion(n, m, seed_a, seed_b):
    from ultragh import map_distortion
    import random as _random

    if m > n:
        n, m = m, n  # surjection needs at least as many sources as targets
    x = random_ultrametric(n, seed_a, POOL)
    y = random_ultrametric(m, seed_b, POOL)
    rng = _random.Random(seed_a * 31 + seed_b)
    f = list(range(m)) + [rng.randrange(m) for _ in range(n - m)]
    rng.shuffle(f)
    corr = associated_correspondence(x, y, f)
    assert distortion(corr) == map_distortion(x, y, f)


def test_lex_min_witness_x2_x3(x2, x3):
    # every correspondence between these two has distortion one, so the
    # returned witness must be the smallest covering pair set outright
    res = min_distortion_correspondence(x2, x3)
    want_value, want_pairs = naive_lex_min_witness(x2, x3, strong=False)
    assert res.distortion.fraction == want_value
    assert res.correspondence.pairs == want_pairs
    assert want_pairs == ((0, 0), (0, 1), (0, 2), (1, 0))


@settings(max_examples=15, deadline=None)
@given(
    st.integers(1, 3), st.integers(1, 3), st.integers(0, 4_000), st.integers(0, 4_000)
)
def test_lex_min_witness_matches_enumeration(n, m, seed_a, seed_b):
    x = random_ultrametric(n, seed_a, POOL)
    y = random_ultrametric(m, seed_b, POOL)
    for strong, search in (
        (False, min_distortion_correspondence),
        (True, min_distortion_strong_correspondence),
    ):
        want_value, want_pairs = naive_lex_min_witness(x, y, strong)
        res = search(x, y)
        assert res.distortion.fraction == want_value
        assert res.correspondence.pairs == want_pairs


small_pairs = st.tuples(
    st.integers(1, 3), st.integers(1, 4), st.integers(0, 5_000), st.integers(0, 5_000)
)


@settings(max_examples=25, deadline=None)
@given(small_pairs)
def test_search_matches_naive_enumeration(params):
    n, m, seed_a, seed_b = params
    x = random_ultrametric(n, seed_a, POOL)
    y = random_ultrametric(m, seed_b, POOL)
    naive_plain, naive_strong = naive_correspondence_minima(x, y)
    plain = min_distortion_correspondence(x, y)
    strong = min_distortion_strong_correspondence(x, y)
    assert plain.distortion.fraction == naive_plain
    assert strong.distortion.fraction == naive_strong
    assert plain.distortion <= strong.distortion
    assert distortion(plain.correspondence) == plain.distortion
    assert distortion(strong.correspondence) == strong.distortion
    assert is_strong_correspondence(strong.correspondence).is_strong


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 3_000), st.integers(0, 3_000))
def test_cna_forms_agree(n, m, seed_a, seed_b):
    # universal form (library) against existential form (oracle) on every
    # correspondence of the pair
    x = random_ultrametric(n, seed_a, POOL)
    y = random_ultrametric(m, seed_b, POOL)
    dx = [[x.dist(i, j).fraction for j in range(n)] for i in range(n)]
    dy = [[y.dist(i, j).fraction for j in range(m)] for i in range(m)]
    subsets = [
        tuple(b for b in range(m) if mask & (1 << b)) for mask in range(1, 1 << m)
    ]

    def rec(level, sets):
        if level == n:
            covered = {b for sub in sets for b in sub}
            if len(covered) != m:
                return
            pairs = tuple((i, b) for i in range(n) for b in sets[i])
            c = Correspondence(x, y, pairs)
            verdict = is_strong_correspondence(c)
            assert verdict.is_strong == strong_existential(
                dx, dy, sets, verdict.distortion.fraction
            )
            return
        for sub in subsets:
            rec(level + 1, sets + [sub])

    rec(0, [])


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(0, 5_000), st.integers(0, 5_000))
def test_equilibrium_bounds_and_partner_constancy(n, seed_a, seed_b):
    x = random_ultrametric(n, seed_a, POOL)
    y = random_ultrametric(n, seed_b, POOL)
    res = min_distortion_strong_correspondence(x, y)
    table = equilibrium_table(res.correspondence)  # partner constancy asserted inside
    for value in table.entries.values():
        assert table.distortion < value <= table.min_diameter


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 5_000), st.integers(0, 5_000))
def test_glue_on_searched_strong_correspondences(n, m, seed_a, seed_b):
    x = random_ultrametric(n, seed_a, POOL)
    y = random_ultrametric(m, seed_b, POOL)
    res = min_distortion_strong_correspondence(x, y)
    glued = glue_along_strong_correspondence(res.correspondence)
    # validate_space ran inside; embeddings preserve all distances
    for i in range(len(x)):
        for j in range(len(x)):
            assert glued.glued_space.dist(
                glued.left_embedding[i], glued.left_embedding[j]
            ) == x.dist(i, j)
    dh = hausdorff_distance(
        glued.glued_space, set(glued.left_embedding), set(glued.right_embedding)
    )
    assert dh <= res.distortion or res.distortion == ExactValue(0)
