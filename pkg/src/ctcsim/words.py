"""Length-lexicographic word enumeration (deterministic report order)."""

from array import array
from itertools import product

from .errors import SpecValidationError


def words_upto(alphabet, max_len: int):
    """All words of length 0..max_len as strings, shortest first."""
    symbols = tuple(alphabet)
    if any(len(s) != 1 for s in symbols):
        raise SpecValidationError("word enumeration needs one-character symbols")
    for n in range(max_len + 1):
        for tup in product(symbols, repeat=n):
            yield "".join(tup)


def word_count(alphabet_size: int, max_len: int) -> int:
    if alphabet_size == 1:
        return max_len + 1
    return (alphabet_size ** (max_len + 1) - 1) // (alphabet_size - 1)


def encode_corpus(alphabet, max_len: int, end_code=None):
    """All words of length 0..max_len as one flat code array plus offsets.

    Every word gets the end-marker code appended, ready for the batch
    stepper. Codes are alphabet positions; end_code defaults to len(alphabet).
    """
    k = len(alphabet)
    end = k if end_code is None else end_code
    flat = array("i")
    offsets = array("i", [0])
    for n in range(max_len + 1):
        for tup in product(range(k), repeat=n):
            flat.extend(tup)
            flat.append(end)
            offsets.append(len(flat))
    return flat, offsets
