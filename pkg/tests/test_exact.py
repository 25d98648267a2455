import itertools
import random

import pytest

from conftest import random_instance
from stepdet import ALL_ALGORITHMS, Instance, Job, TooLarge, evaluate, run_algorithm, solve_bnb, solve_brute_force
from stepdet.exact import permutation_tree_size


def enumerate_optimum(inst):
    # independent oracle: full evaluate on every permutation, lexicographic ties
    return min((evaluate(inst, p).z, p) for p in itertools.permutations(range(1, inst.n + 1)))


def test_e2(inst_e2):
    for solver in (solve_bnb, solve_brute_force):
        res = solver(inst_e2)
        assert res.z_opt == 0 and res.schedule.sequence == (1, 2)
    assert solve_brute_force(inst_e2).nodes_explored == 2


def test_single_job():
    inst = Instance((Job(1, 3, 7, 1, 5, 2),))
    assert solve_bnb(inst).schedule.sequence == (1,)
    assert solve_brute_force(inst).z_opt == 4


def test_identical_jobs_lexicographic():
    inst = Instance.from_arrays([3] * 3, [2] * 3, [1] * 3, [2] * 3, [2] * 3)
    assert solve_brute_force(inst).schedule.sequence == (1, 2, 3)
    assert solve_bnb(inst).schedule.sequence == (1, 2, 3)


def test_loose_due_dates_zero():
    rng = random.Random(1)
    inst = random_instance(rng, 8)
    loose = Instance.from_arrays(*(inst.arrays[k] for k in "ab"), [inst.makespan_bound] * 8,
                                 inst.arrays["h"], inst.arrays["w"])
    assert solve_bnb(loose).z_opt == 0


def test_brute_force_matches_enumeration():
    rng = random.Random(2)
    for _ in range(40):
        inst = random_instance(rng, rng.randint(1, 6))
        z, seq = enumerate_optimum(inst)
        res = solve_brute_force(inst)
        assert (res.z_opt, res.schedule.sequence) == (z, seq)


def test_bnb_matches_brute_force():
    rng = random.Random(3)
    for k in range(200):
        inst = random_instance(rng, rng.randint(1, 8), amax=rng.choice([4, 20]))
        bf, bb = solve_brute_force(inst), solve_bnb(inst)
        assert bb.z_opt == bf.z_opt
        assert bb.schedule.sequence == bf.schedule.sequence
        assert bb.z_opt == evaluate(inst, bb.schedule.sequence).z
        assert bb.nodes_explored <= permutation_tree_size(inst.n)
        for name in ALL_ALGORITHMS:
            assert run_algorithm(inst, name).z >= bb.z_opt


def test_bnb_with_duplicate_jobs():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.randint(2, 7)
        pool = [(rng.randint(1, 5), rng.randint(1, 3), rng.randint(0, 15), rng.randint(0, 10), rng.randint(1, 3))
                for _ in range(3)]
        rows = [rng.choice(pool) for _ in range(n)]
        inst = Instance(tuple(Job(i + 1, *r) for i, r in enumerate(rows)))
        bf, bb = solve_brute_force(inst), solve_bnb(inst)
        assert (bb.z_opt, bb.schedule.sequence) == (bf.z_opt, bf.schedule.sequence)


def test_tree_size():
    assert permutation_tree_size(3) == 3 + 6 + 6
    assert permutation_tree_size(1) == 1


def test_caps():
    big = random_instance(random.Random(5), 15)
    with pytest.raises(TooLarge):
        solve_bnb(big)
    with pytest.raises(TooLarge):
        solve_brute_force(random_instance(random.Random(5), 11))
    with pytest.raises(TooLarge):
        solve_bnb(random_instance(random.Random(5), 6), cap=5)


def test_to_dict(inst_e2):
    d = solve_bnb(inst_e2).to_dict()
    assert d["Z*"] == 0 and d["sequence"] == [1, 2] and d["method"] == "branch-and-bound"
    assert isinstance(d["nodes"], int)
