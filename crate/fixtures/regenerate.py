#!/usr/bin/env python3
"""Regenerate the bundled OEIS fixtures from each entry's defining formula.

Used when oeis.org is unreachable. With network access prefer
`irrarray fetch <A-number>`, which downloads the published b-file.
"""
import math
import os

TERMS = 1000
HERE = os.path.dirname(os.path.abspath(__file__))


def counted_rows(row):
    """Concatenate row(1), row(2), ... into one stream."""
    k = 1
    while True:
        for v in row(k):
            yield v
        k += 1


def take(gen, count):
    out = []
    for v in gen:
        out.append(v)
        if len(out) == count:
            break
    return out


def ilog_digits(n, base):
    d = 1
    while n >= base:
        n //= base
        d += 1
    return d


def ceil_log2(n):
    return (n - 1).bit_length()


SEQUENCES = {
    # a_number: (offset, list of terms)
    "A000012": (0, [1] * TERMS),
    "A000194": (0, [0] + take(counted_rows(lambda k: [k] * (2 * k)), TERMS - 1)),
    "A000326": (0, [n * (3 * n - 1) // 2 for n in range(TERMS)]),
    "A002024": (1, take(counted_rows(lambda k: [k] * k), TERMS)),
    "A002260": (1, take(counted_rows(lambda k: range(1, k + 1)), TERMS)),
    "A002411": (0, [n * n * (n + 1) // 2 for n in range(TERMS)]),
    "A003056": (0, take(counted_rows(lambda k: [k - 1] * k), TERMS)),
    "A004736": (1, take(counted_rows(lambda k: range(k, 0, -1)), TERMS)),
    "A004767": (0, [4 * n + 3 for n in range(TERMS)]),
    "A005891": (0, [(5 * n * n + 5 * n + 2) // 2 for n in range(TERMS)]),
    "A014105": (0, [n * (2 * n + 1) for n in range(TERMS)]),
    "A017233": (0, [9 * n + 6 for n in range(TERMS)]),
    "A029837": (1, [ceil_log2(n) for n in range(1, TERMS + 1)]),
    "A062050": (1, [n - (1 << (n.bit_length() - 1)) + 1 for n in range(1, TERMS + 1)]),
    "A064866": (1, take(counted_rows(lambda k: range(1, k * k + 1)), TERMS)),
    "A071797": (1, take(counted_rows(lambda k: range(1, 2 * k)), TERMS)),
    "A074279": (1, take(counted_rows(lambda k: [k] * (k * k)), TERMS)),
    "A080883": (0, [(math.isqrt(n) + 1) ** 2 - n for n in range(TERMS)]),
    "A081604": (0, [ilog_digits(n, 3) for n in range(TERMS)]),
    "A122197": (1, take(counted_rows(lambda k: list(range(1, k + 1)) * 2), TERMS)),
}


def main():
    for a_number, (offset, terms) in sorted(SEQUENCES.items()):
        path = os.path.join(HERE, a_number + ".txt")
        with open(path, "w") as f:
            f.write("# %s (regenerated from definition)\n" % a_number)
            for i, v in enumerate(terms):
                f.write("%d %d\n" % (offset + i, v))


if __name__ == "__main__":
    main()
