import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olcanneal.errors import InvalidArgument, NotAcyclicError
from olcanneal.formulation import (IsingProblem, QuboProblem, VariableMap, bits_to_spins,
                                   dumps_qubo, dumps_variable_map, edge_qubo,
                                   estimate_physical_qubits, ising_to_qubo, loads_qubo,
                                   loads_variable_map, normalize_ising, positional_qubo,
                                   qubo_to_ising)
from olcanneal.olcgraph import graph_from_sequence
from olcanneal.solvers import energy
from conftest import synthetic_graph
from oracles import (brute_min, edge_objective, ham_paths_by_permutation, min_path_cover_dag,
                     positional_objective, random_dag, random_digraph)


def ising_energy_direct(m, spins):
    return m.offset + sum(c * spins[i] for i, c in m.h.items()) + \
        sum(c * spins[i] * spins[j] for (i, j), c in m.J.items())


def random_qubo(rng, n):
    lin = {i: Fraction(rng.randint(-8, 8), rng.choice([1, 2, 3])) for i in range(n)}
    quad = {(i, j): Fraction(rng.randint(-8, 8), rng.choice([1, 2, 4]))
            for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.6}
    return QuboProblem(n, lin, quad, Fraction(rng.randint(-5, 5)))


def x_matrix(bits, n):
    return [[bits[v * n + j] for j in range(n)] for v in range(n)]


class TestPositional:
    def test_single_vertex(self):
        q, vmap = positional_qubo(synthetic_graph(1, []), A=1)
        assert q.n == 1 and len(vmap) == 1
        assert q.energy([1]) == 0 and q.energy([0]) == 2

    def test_two_vertices(self):
        g = synthetic_graph(2, [(0, 1)])
        q, _ = positional_qubo(g, A=1)
        assert q.n == 4
        non_edges = [(1, 0)]
        for bits in itertools.product((0, 1), repeat=4):
            assert q.energy(bits) == positional_objective(2, non_edges, x_matrix(bits, 2))
        # x[v, j] at index v*2 + j
        assert q.energy([1, 0, 0, 1]) == 0
        assert q.energy([0, 1, 1, 0]) >= 1

    @pytest.mark.parametrize("seq,size", [("ATCGG", 9), ("ATCGGA", 16), ("ACGTTGCA", 36),
                                          ("ACCGTTAGCT", 64)])
    def test_sizes(self, seq, size):
        q, vmap = positional_qubo(graph_from_sequence(seq))
        assert q.n == size == len(vmap)

    def test_penalty_validation(self):
        with pytest.raises(InvalidArgument):
            positional_qubo(synthetic_graph(2, [(0, 1)]), A=0)
        with pytest.raises(InvalidArgument):
            positional_qubo(synthetic_graph(2, [(0, 1)]), A=-1)

    def test_penalty_scales_objective(self):
        g = synthetic_graph(3, [(0, 1), (1, 2), (2, 0)])
        q1, _ = positional_qubo(g, A=1)
        q3, _ = positional_qubo(g, A=Fraction(3, 2))
        rng = random.Random(0)
        for _ in range(50):
            bits = [rng.randint(0, 1) for _ in range(9)]
            assert q3.energy(bits) == Fraction(3, 2) * q1.energy(bits)

    def test_energy_decomposition_random(self):
        rng = random.Random(3)
        for _ in range(40):
            n = rng.randint(1, 5)
            pairs = random_digraph(rng, n, 0.4)
            q, _ = positional_qubo(synthetic_graph(n, pairs), A=2)
            non_edges = [(u, v) for u in range(n) for v in range(n)
                         if u != v and (u, v) not in pairs]
            for _ in range(30):
                bits = [int(rng.random() < 0.3) for _ in range(n * n)]
                assert q.energy(bits) == positional_objective(n, non_edges, x_matrix(bits, n), A=2)

    def test_zero_iff_hamiltonian_small(self):
        rng = random.Random(5)
        for _ in range(25):
            n = rng.randint(1, 3)
            pairs = random_digraph(rng, n, 0.5)
            q, _ = positional_qubo(synthetic_graph(n, pairs))
            paths = set(ham_paths_by_permutation(n, pairs))
            zeros = set()
            for bits in itertools.product((0, 1), repeat=n * n):
                if q.energy(bits) == 0:
                    x = x_matrix(bits, n)
                    zeros.add(tuple(next(v for v in range(n) if x[v][j]) for j in range(n)))
                    assert all(sum(row) == 1 for row in x)
            assert zeros == paths


class TestEdge:
    def test_chain(self):
        g = synthetic_graph(3, [(0, 1), (1, 2)])
        q, vmap = edge_qubo(g, A=1)
        assert q.n == 2 and vmap.reverse == ((0, 1), (1, 2))
        values = {bits: q.energy(bits) for bits in itertools.product((0, 1), repeat=2)}
        assert values == {(0, 0): 6, (0, 1): 4, (1, 0): 4, (1, 1): 2}

    def test_single_vertex(self):
        q, vmap = edge_qubo(synthetic_graph(1, []), A=1)
        assert q.n == 0 and len(vmap) == 0 and q.energy([]) == 2

    def test_cycle_rejected_with_witness(self):
        g = synthetic_graph(3, [(0, 1), (1, 2), (2, 0)])
        with pytest.raises(NotAcyclicError) as info:
            edge_qubo(g)
        cyc = info.value.cycle
        assert len(cyc) == 3 and all(g.has_edge(u, v) for u, v in cyc)

    def test_matches_direct_objective(self):
        rng = random.Random(8)
        for _ in range(60):
            n = rng.randint(1, 6)
            pairs = random_dag(rng, n, 6)
            g = synthetic_graph(n, pairs)
            q, vmap = edge_qubo(g, A=3)
            order = [vmap.key(i) for i in range(q.n)]
            for bits in itertools.product((0, 1), repeat=q.n):
                assert q.energy(bits) == edge_objective(n, order, bits, A=3)

    def test_ground_energy_is_twice_path_cover(self):
        rng = random.Random(21)
        for _ in range(150):
            n = rng.randint(1, 6)
            pairs = random_dag(rng, n, 5)
            q, vmap = edge_qubo(synthetic_graph(n, pairs), A=1)
            best, arg = brute_min(q.n, q.energy)
            p = min_path_cover_dag(n, pairs)
            assert best == 2 * p
            if p == 1:
                order = [vmap.key(i) for i in range(q.n)]
                paths = ham_paths_by_permutation(n, pairs)
                assert len(arg) == len(paths)
                for bits in arg:
                    chosen = {order[i] for i, b in enumerate(bits) if b}
                    assert any(chosen == set(zip(pth, pth[1:])) for pth in paths)


class TestTransforms:
    def test_linear(self):
        m = qubo_to_ising(QuboProblem(1, {0: 3}, {}))
        assert m.h == {0: Fraction(3, 2)} and m.offset == Fraction(3, 2) and m.J == {}

    def test_product(self):
        m = qubo_to_ising(QuboProblem(2, {}, {(0, 1): 1}))
        assert m.J == {(0, 1): Fraction(1, 4)}
        assert m.h == {0: Fraction(1, 4), 1: Fraction(1, 4)}
        assert m.offset == Fraction(1, 4)

    def test_inverse(self):
        q = ising_to_qubo(IsingProblem(1, {0: Fraction(1, 2)}, {}, Fraction(1, 2)))
        assert q.linear == {0: 1} and q.quadratic == {} and q.offset == 0

    def test_positional_round_trip_exhaustive(self):
        q, _ = positional_qubo(synthetic_graph(2, [(0, 1)]))
        m = qubo_to_ising(q)
        for bits in itertools.product((0, 1), repeat=4):
            assert q.energy(bits) == energy(m, bits_to_spins(bits))

    def test_random_five_variable(self):
        rng = random.Random(2)
        q = random_qubo(rng, 5)
        m = qubo_to_ising(q)
        back = ising_to_qubo(m)
        for bits in itertools.product((0, 1), repeat=5):
            spins = bits_to_spins(bits)
            assert q.energy(bits) == ising_energy_direct(m, spins) == back.energy(bits)

    @given(st.integers(0, 10_000))
    def test_coefficient_round_trip(self, seed):
        q = random_qubo(random.Random(seed), random.Random(seed).randint(1, 6))
        back = ising_to_qubo(qubo_to_ising(q))
        assert (back.linear, back.quadratic, back.offset) == (q.linear, q.quadratic, q.offset)


class TestNormalize:
    def test_example(self):
        m, scale = normalize_ising(IsingProblem(2, {0: 2, 1: -4}, {}))
        assert m.h == {0: Fraction(1, 2), 1: -1} and scale == 4

    def test_fixpoint(self):
        orig = IsingProblem(2, {0: Fraction(1, 2)}, {(0, 1): -1}, 3)
        m, scale = normalize_ising(orig)
        assert m == orig and scale == 1

    def test_all_zero(self):
        orig = IsingProblem(3, {}, {}, 5)
        assert normalize_ising(orig) == (orig, 1)

    def test_offset_untouched_and_bound(self):
        m, scale = normalize_ising(IsingProblem(2, {0: 6}, {(0, 1): -3}, 7))
        assert m.offset == 7 and scale == 6 and m.max_abs_coefficient() == 1

    @settings(max_examples=50)
    @given(st.integers(0, 10_000))
    def test_argmin_preserved(self, seed):
        rng = random.Random(seed)
        m = qubo_to_ising(random_qubo(rng, 4))
        norm, _ = normalize_ising(m)
        before = brute_min(4, lambda s: ising_energy_direct(m, s), values=(-1, 1))[1]
        after = brute_min(4, lambda s: ising_energy_direct(norm, s), values=(-1, 1))[1]
        assert before == after


@pytest.mark.parametrize("n,expected", [(9, 36), (16, 80), (25, 200), (36, 360), (49, 686),
                                        (64, 1088)])
def test_physical_qubits(n, expected):
    assert estimate_physical_qubits(n) == expected


class TestFormats:
    def test_qubo_text_round_trip(self):
        q, _ = positional_qubo(graph_from_sequence("ATCGG"))
        text = dumps_qubo(q, {"a": 1})
        lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
        assert lines[0] == f"p qubo 9 {len(q.linear)} {len(q.quadratic)}"
        assert lines[-1] == f"c {float(q.offset):.12g}"
        assert loads_qubo(text) == QuboProblem(q.n, q.linear, q.quadratic, q.offset)

    def test_qubo_coefficients_twelve_digits(self):
        text = dumps_qubo(QuboProblem(2, {0: Fraction(1, 3)}, {(0, 1): Fraction(-2, 7)}))
        assert "0 0 0.333333333333" in text and "0 1 -0.285714285714" in text

    def test_qubo_parse_errors(self):
        with pytest.raises(InvalidArgument):
            loads_qubo("0 0 1\n")
        with pytest.raises(InvalidArgument):
            loads_qubo("p qubo 2 2 0\n0 0 1\nc 0\n")

    def test_variable_map_round_trip(self):
        _, vmap = edge_qubo(synthetic_graph(3, [(0, 1), (1, 2)]))
        back = loads_variable_map(dumps_variable_map(vmap))
        assert back == vmap and back.index((1, 2)) == 1

    def test_variable_map_bijection(self):
        _, vmap = positional_qubo(synthetic_graph(3, []))
        assert len(vmap) == 9
        assert all(vmap.index(vmap.key(i)) == i for i in range(9))
        with pytest.raises(InvalidArgument):
            VariableMap("positional", ((0, 0), (0, 0)))
