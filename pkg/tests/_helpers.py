"""Shared generators for the test suite."""
from uqfrank.lattice import det, gram_from_rows


def random_pd_gram(rnd, r, bound=5):
    """Random positive definite integer Gram matrix with ``|entries| <= bound``.

    Rows are added one at a time and redrawn until the new leading minor is
    positive, so large ranks do not stall on whole-matrix rejection.
    """
    G = []
    for i in range(r):
        while True:
            cap = rnd.randint(0, bound)
            row = [rnd.randint(-cap, cap) for _ in range(i)]
            diag = rnd.randint(1, bound)
            trial = [old + [row[k]] for k, old in enumerate(G)] + [row + [diag]]
            if det(trial) > 0:
                G = trial
                break
    return gram_from_rows(G)
