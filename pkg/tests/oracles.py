"""Independent reference implementations used only by the tests.

Nothing here imports from stripsort: strips are rebuilt from the definition,
moves are performed on explicit lists of strips, and distances come from a
plain breadth-first search over those lists.
"""

from collections import deque


def naive_strips(seq):
    out = [[seq[0]]]
    for v in seq[1:]:
        if v == out[-1][-1] + 1:
            out[-1].append(v)
        else:
            out.append([v])
    return out


def naive_rev(seq):
    return sum(1 for a, b in zip(seq, seq[1:]) if a > b)


def swap_results(seq):
    blocks = naive_strips(list(seq))
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            b = list(blocks)
            b[i], b[j] = b[j], b[i]
            yield tuple(v for blk in b for v in blk)


def block_results(seq):
    blocks = naive_strips(list(seq))
    for i, blk in enumerate(blocks):
        rest = [v for k, other in enumerate(blocks) if k != i for v in other]
        for g in range(len(rest) + 1):
            out = tuple(rest[:g] + blk + rest[g:])
            if out != tuple(seq):
                yield out


def bfs_distance(seq, step):
    seq = tuple(seq)
    goal = tuple(sorted(seq))
    dist = {seq: 0}
    queue = deque([seq])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            return dist[cur]
        for nxt in step(cur):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    raise AssertionError("unreachable")
