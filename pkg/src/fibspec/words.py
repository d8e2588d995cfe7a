"""Fibonacci numbers, substitution words, and rotation words.

Words are plain strings over the alphabet {'0', '1'}.  They serialize
as-is in CSV/JSON output.
"""

from fractions import Fraction

import numpy as np

from .errors import ConfigError, InvalidFrequencyError

SUBSTITUTION = {"1": "10", "0": "1"}


def fib_number(k):
    """k-th Fibonacci number under the convention F_0 = F_1 = 1.

    Python integers are unbounded, so there is no overflow to report.
    """
    if k < 0:
        raise ConfigError(f"Fibonacci index must be nonnegative, got {k}")
    a, b = 1, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def substitution_word(k):
    """k-fold substitution image of '1' (0 -> 1, 1 -> 10); length F_{k+1}."""
    if k < 0:
        raise ConfigError(f"substitution index must be nonnegative, got {k}")
    word = "1"
    for _ in range(k):
        word = "".join(SUBSTITUTION[ch] for ch in word)
    return word


def approximant_word(k):
    """One period of the k-th periodic approximant cell, length F_k.

    The cells concatenate as w_k = w_{k-1} + w_{k-2} starting from
    w_0 = "0", w_1 = "1"; for k >= 1 this equals substitution_word(k - 1).
    """
    if k < 0:
        raise ConfigError(f"approximant index must be nonnegative, got {k}")
    if k == 0:
        return "0"
    prev, cur = "0", "1"
    for _ in range(k - 1):
        prev, cur = cur, cur + prev
    return cur


def rotation_word(num, den, theta=0, n_start=0, n_count=None):
    """Letters floor((n+1)*num/den + theta) - floor(n*num/den + theta).

    All arithmetic is exact on rationals; floating-point floors are
    unreliable exactly at the discontinuities that define the word.
    `theta` must therefore be a Fraction, an integer, or a string such
    as "1/3".  Defaults to one full period (n_count = den).
    """
    if den == 0:
        raise InvalidFrequencyError("rotation word needs a nonzero denominator")
    if den < 0:
        raise ConfigError("rotation word denominator must be positive")
    if isinstance(theta, float):
        raise ConfigError("theta must be rational (Fraction, int, or 'p/q' string)")
    theta = Fraction(theta)
    if n_count is None:
        n_count = den
    alpha = Fraction(num, den)
    letters = []
    for n in range(n_start, n_start + n_count):
        w = ((n + 1) * alpha + theta).__floor__() - (n * alpha + theta).__floor__()
        if w not in (0, 1):
            raise ConfigError(
                f"rotation word letter {w} at n={n} falls outside the binary "
                f"alphabet; requires 0 <= num <= den"
            )
        letters.append(str(w))
    return "".join(letters)


def validate_word(word):
    """Raise unless the word is a nonempty string over {'0', '1'}."""
    if not word:
        raise ConfigError("word must be nonempty")
    if any(ch not in "01" for ch in word):
        raise ConfigError(f"word contains letters outside {{0,1}}: {word!r}")
    return word


def letters_array(word):
    """Word as a uint8 numpy array of 0/1 letters."""
    validate_word(word)
    return np.frombuffer(word.encode("ascii"), dtype=np.uint8) - ord("0")


def cyclic_shifts(word):
    """All cyclic rotations of the word."""
    return [word[i:] + word[:i] for i in range(len(word))]
