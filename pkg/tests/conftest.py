import itertools

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from easywishart.partitions import Partition

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

PI1, PI2, PI3, PI4 = "ab/ab", "ab/ba", "aa/bb", "aa/aa"
BASIC = (PI1, PI2, PI3, PI4)


@st.composite
def partitions(draw, max_upper=4, max_lower=4, even=False):
    k = draw(st.integers(0, max_upper))
    l = draw(st.integers(0 if k else 1, max_lower))
    if even:
        if (k + l) % 2:
            l = l - 1 if l else l + 1
        if k + l == 0:
            l = 2
        n = k + l
        order = draw(st.permutations(range(n)))
        merge = draw(st.lists(st.integers(0, n // 2 - 1), min_size=n // 2, max_size=n // 2))
        labels = [0] * n
        for i in range(0, n, 2):
            labels[order[i]] = labels[order[i + 1]] = merge[i // 2]
        return Partition.from_labels(k, l, labels)
    n = k + l
    labels = draw(st.lists(st.integers(0, n), min_size=n, max_size=n))
    return Partition.from_labels(k, l, labels)


def brute_set_partitions(n):
    """All set partitions of range(n) as frozensets of frozensets, by merging."""
    out = set()
    for labels in itertools.product(range(n), repeat=n):
        groups = {}
        for pos, lab in enumerate(labels):
            groups.setdefault(lab, set()).add(pos)
        out.add(frozenset(frozenset(g) for g in groups.values()))
    return out


def naive_generalized_moment(L, sigma, tau, word):
    """Direct nested-loop evaluation, no einsum."""
    L = np.asarray(L)
    n = int(round(np.sqrt(L.shape[0])))
    p = len(word)
    Ls = L.conj().T
    total = 0
    for i in itertools.product(range(n), repeat=p):
        for j in itertools.product(range(n), repeat=p):
            term = 1
            for x in range(p):
                M = L if word[x] == "1" else Ls
                term = term * M[i[x] * n + j[x], i[sigma[x]] * n + j[tau[x]]]
                if term == 0:
                    break
            total += term
    ncyc = lambda perm: len({frozenset(_orbit(perm, x)) for x in range(p)})
    return total, n ** (ncyc(sigma) + ncyc(tau))


def _orbit(perm, x):
    seen = [x]
    y = perm[x]
    while y != x:
        seen.append(y)
        y = perm[y]
    return seen


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
