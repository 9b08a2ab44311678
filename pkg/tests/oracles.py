"""Independent reference implementations used as test oracles.

Everything here is recomputed from first principles with the stdlib so
the suites never verify the package against itself.
"""

import math

from nomkit import AttributeSpec, Dataset


def toy(rows, values_per_attr, class_values=("n", "y"), target_last=True):
    """Dataset from plain value-index rows; target is the last column."""
    n_attrs = len(values_per_attr)
    specs = tuple(
        AttributeSpec(f"a{j}", tuple(f"v{j}_{i}" for i in range(k)))
        for j, k in enumerate(values_per_attr)
    ) + (AttributeSpec("class", class_values),)
    return Dataset("toy", specs, tuple(tuple(r) for r in rows),
                   target_index=n_attrs if target_last else 0)


def entropy_of(counts):
    total = sum(counts)
    if total <= 0:
        return 0.0
    return -sum(c / total * math.log2(c / total) for c in counts if c)


def brute_min_error(rows, n_attrs, n_classes, used=frozenset(), min_w=2):
    """Minimum training error over every recursive partition built from
    admissible positive-gain splits. A greedy grower picks one member of
    this family, so its training error can never fall below this."""
    counts = [0] * n_classes
    for r in rows:
        counts[r[-1]] += 1
    leaf_err = len(rows) - max(counts)
    if leaf_err == 0 or len(rows) < 2 * min_w:
        return leaf_err
    parent_h = entropy_of(counts)
    options = []
    for a in range(n_attrs):
        if a in used:
            continue
        parts = {}
        for r in rows:
            parts.setdefault(r[a], []).append(r)
        if sum(1 for p in parts.values() if len(p) >= min_w) < 2:
            continue
        branch_h = sum(
            len(p) / len(rows) * entropy_of(
                [sum(1 for r in p if r[-1] == c) for c in range(n_classes)])
            for p in parts.values())
        if parent_h - branch_h <= 1e-12:
            continue
        options.append(sum(
            brute_min_error(p, n_attrs, n_classes, used | {a}, min_w)
            for p in parts.values()))
    if not options:
        return leaf_err
    return min(options)


def regrow(rows, arities, n_classes, used=frozenset(), min_w=2.0):
    """Naive reimplementation of the growing rules (no pruning).

    Returns ("leaf", distribution, predicted) or
    ("split", attribute, children, distribution), directly comparable to
    a built tree via shape().
    """
    counts = [0.0] * n_classes
    for r in rows:
        counts[r[-1]] += 1.0
    majority = max(range(n_classes), key=lambda c: (counts[c], -c))
    total = sum(counts)
    if counts[majority] == total or total < 2 * min_w:
        return ("leaf", tuple(counts), majority)
    parent_h = entropy_of(counts)
    cands = []
    for a in range(len(arities)):
        if a in used:
            continue
        parts = [[] for _ in range(arities[a])]
        for r in rows:
            parts[r[a]].append(r)
        if sum(1 for p in parts if len(p) >= min_w) < 2:
            continue
        branch_h = 0.0
        occupied = []
        for p in parts:
            if p:
                pc = [sum(1.0 for r in p if r[-1] == c)
                      for c in range(n_classes)]
                branch_h += len(p) / total * entropy_of(pc)
                occupied.append(len(p))
        gain = parent_h - branch_h
        if gain <= 0:
            continue
        si = entropy_of(occupied)
        ratio = gain / si if si > 0 else 0.0
        cands.append((a, gain, ratio, parts))
    if not cands:
        return ("leaf", tuple(counts), majority)
    mean_gain = sum(g for _, g, _, _ in cands) / len(cands)
    best = None
    for a, g, ratio, parts in cands:
        if g < mean_gain:
            continue
        if best is None or ratio > best[2]:
            best = (a, g, ratio, parts)
    a, _, _, parts = best
    children = []
    for p in parts:
        if p:
            children.append(regrow(p, arities, n_classes, used | {a}, min_w))
        else:
            children.append(
                ("leaf", tuple(0.0 for _ in range(n_classes)), majority))
    return ("split", a, tuple(children), tuple(counts))


def shape(node):
    """Nested-tuple view of a built tree matching regrow()'s output."""
    from nomkit import Leaf

    if isinstance(node, Leaf):
        return ("leaf", node.distribution, node.predicted)
    return ("split", node.attribute,
            tuple(shape(c) for c in node.children), node.distribution)


def random_tiny_dataset(rng):
    """Small nominal dataset: up to 3 attributes, up to 12 instances."""
    n_attrs = rng.randint(1, 3)
    arity = [rng.randint(2, 3) for _ in range(n_attrs)]
    n_classes = rng.randint(2, 3)
    n_rows = rng.randint(4, 12)
    rows = []
    signal = rng.random() < 0.5
    for _ in range(n_rows):
        vals = [rng.randrange(k) for k in arity]
        if signal and rng.random() < 0.8:
            cls = vals[0] % n_classes
        else:
            cls = rng.randrange(n_classes)
        rows.append(tuple(vals) + (cls,))
    return rows, arity, n_classes


def tree_training_error(node):
    from nomkit import Leaf

    if isinstance(node, Leaf):
        return node.error_weight
    return sum(tree_training_error(c) for c in node.children)


def kmodes_reference(rows, n_values, k, seed, max_iterations=500,
                     trace=None):
    """From-scratch k-modes following the documented procedure.

    rows are tuples of value indices. Returns (centroids, assignment,
    sse, iterations, reseeds) or None when k distinct seeds cannot be
    drawn; reseeds counts empty-cluster rescues. When trace is a list,
    the SSE reached after each assignment pass is appended to it.
    """
    import random

    def mism(a, b):
        return sum(1 for x, y in zip(a, b) if x != y)

    n = len(rows)
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    cents, seen = [], set()
    for i in order:
        if rows[i] not in seen:
            seen.add(rows[i])
            cents.append(rows[i])
            if len(cents) == k:
                break
    if len(cents) < k:
        return None
    assign = [0] * n
    prev = None
    iterations = 0
    reseeds = 0
    while iterations < max_iterations:
        for i in range(n):
            assign[i] = min(range(k),
                            key=lambda c: (mism(rows[i], cents[c]), c))
        iterations += 1
        sizes = [0] * k
        for c in assign:
            sizes[c] += 1
        for c in range(k):
            if sizes[c] == 0:
                reseeds += 1
                far = max(range(n),
                          key=lambda i: (mism(rows[i], cents[assign[i]]),
                                         -i))
                sizes[assign[far]] -= 1
                assign[far] = c
                sizes[c] = 1
                cents[c] = rows[far]
        if trace is not None:
            trace.append(float(sum(
                mism(rows[i], cents[assign[i]]) for i in range(n))))
        if assign == prev:
            break
        prev = list(assign)
        for c in range(k):
            members = [i for i in range(n) if assign[i] == c]
            cents[c] = tuple(
                max(range(n_values[j]),
                    key=lambda v: (sum(1 for i in members
                                       if rows[i][j] == v), -v))
                for j in range(len(n_values)))
    sse = sum(mism(rows[i], cents[assign[i]]) for i in range(n))
    return tuple(cents), tuple(assign), float(sse), iterations, reseeds


def auc_by_pairs(scores, labels):
    """AUC as the fraction of (positive, negative) pairs ranked
    correctly, ties counting one half. Quadratic on purpose."""
    pos = [s for s, y in zip(scores, labels) if y]
    neg = [s for s, y in zip(scores, labels) if not y]
    if not pos or not neg:
        raise ValueError("need both classes")
    wins = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(pos) * len(neg))
