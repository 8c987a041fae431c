"""Words in a free group: letters are nonzero ints, ``-i`` is the inverse of ``i``."""

from __future__ import annotations


def free_reduce(word) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word) -> tuple[int, ...]:
    w = free_reduce(word)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i : j + 1]


def inverse(word) -> tuple[int, ...]:
    return tuple(-x for x in reversed(word))


def conjugacy_key(word, up_to_inverse: bool = False) -> tuple[int, ...]:
    """Least rotation of the cyclic reduction (optionally also over the inverse)."""
    w = cyclic_reduce(word)
    if not w:
        return ()
    cands = [w, inverse(w)] if up_to_inverse else [w]
    return min(c[k:] + c[:k] for c in cands for k in range(len(c)))


def are_conjugate(u, v, up_to_inverse: bool = False) -> bool:
    return conjugacy_key(u, up_to_inverse) == conjugacy_key(v, up_to_inverse)


def format_word(word, names=None) -> str:
    if not word:
        return "1"
    parts = []
    for x in word:
        name = names[abs(x) - 1] if names else f"x{abs(x)}"
        parts.append(name if x > 0 else name + "^-1")
    return " ".join(parts)
