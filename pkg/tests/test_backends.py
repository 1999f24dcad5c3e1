import os
import subprocess
import sys

import numpy as np
import pytest

from ksexplain import _backend, _pykernels
from ksexplain.cumvec import build_instance
from ksexplain.sizer import omega

from conftest import failing_cases, random_small_case

needs_ext = pytest.mark.skipif("cython" not in _backend.available(), reason="extension not built")


def _instances(seed, count):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        R, T, alpha = random_small_case(rng, lo=2, hi=15, alphabet=8, alphas=(0.01, 0.05, 0.1, 0.2, 0.3))
        out.append(build_instance(R, T, alpha))
    return out


@needs_ext
def test_size_kernels_agree():
    from ksexplain import _kernels as ck

    for inst in (i for i in _instances(5, 300) if i.m > 1):
        for h in range(1, inst.m):
            args = (inst.C_T, inst.C_R, h, inst.m, inst.n, omega(inst, h))
            lp, up = _pykernels.bounds(*args)
            lc, uc = ck.bounds(*args)
            assert np.array_equal(lp, lc) and np.array_equal(up, uc)
            assert bool(_pykernels.exists(*args)) == bool(ck.exists(*args))
            assert bool(_pykernels.necessary(*args)) == bool(ck.necessary(*args))


@needs_ext
def test_partial_and_witness_kernels_agree():
    from ksexplain import _kernels as ck

    rng = np.random.default_rng(2)
    for _ in range(2000):
        q = int(rng.integers(1, 9))
        l = np.sort(rng.integers(0, 4, q + 1)).astype(np.int64)
        u = (l + rng.integers(-1, 3, q + 1)).astype(np.int64)
        cs = np.concatenate(([0], np.cumsum(rng.integers(0, 2, q)))).astype(np.int64)
        assert bool(_pykernels.partial_ok(l, u, cs)) == bool(ck.partial_ok(l, u, cs))
    for inst, _ in failing_cases(seed=9, count=100):
        h = inst.m - 1
        l, u = _pykernels.bounds(inst.C_T, inst.C_R, h, inst.m, inst.n, omega(inst, h))
        dT = np.ascontiguousarray(inst.t_mult, dtype=np.int64)
        assert np.array_equal(_pykernels.witness(l, u, dT), ck.witness(l, u, dT))


@needs_ext
def test_greedy_select_agrees():
    from ksexplain import _kernels as ck
    from ksexplain.sizer import bounds, explanation_size

    for inst, L in failing_cases(seed=17, count=200):
        k = explanation_size(inst).k
        t = bounds(inst, k)
        pos = np.ascontiguousarray(inst.t_pos[np.asarray(L)], dtype=np.int64)
        pp, pc = _pykernels.greedy_select(t.l, t.u, pos, k)
        cp, cc = ck.greedy_select(t.l, t.u, pos, k)
        assert list(pp) == list(cp) and pc == cc


def test_snapping_helpers():
    assert _pykernels.ceil_snap(np.array([2.0000000000001, 2.1]))[0] == 2
    assert _pykernels.floor_snap(np.array([2.9999999999999, 2.9]))[0] == 3
    assert _pykernels.floor_snap(np.array([2.9]))[0] == 2


def test_selection_and_context_manager():
    before = _backend.current()
    with _backend.use_backend("python") as k:
        assert k.BACKEND == "python" == _backend.current()
    assert _backend.current() == before
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")


def _backend_in_subprocess(value):
    env = dict(os.environ, KSEXPLAIN_BACKEND=value)
    out = subprocess.run([sys.executable, "-W", "always", "-c",
                          "import ksexplain; print(ksexplain.kernel_backend())"],
                         capture_output=True, text=True, env=env, check=True)
    return out.stdout.strip(), out.stderr


def test_env_var_forces_python():
    assert _backend_in_subprocess("python")[0] == "python"


def test_env_var_unknown_falls_back_with_warning():
    name, err = _backend_in_subprocess("fortran")
    assert name == "python" and "falling back" in err
