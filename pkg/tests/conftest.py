import random

import pytest

from lexiscan.distance import preset_operations

WORDS3 = ("lead", "real", "ear")


@pytest.fixture(scope="session")
def lev():
    return preset_operations("lev")


@pytest.fixture(scope="session")
def lev_transpose():
    return preset_operations("lev-transpose")


@pytest.fixture(scope="session")
def lev_merge_split():
    return preset_operations("lev-merge-split")


@pytest.fixture(scope="session")
def all_presets(lev, lev_transpose, lev_merge_split):
    return {
        "lev": lev,
        "lev-transpose": lev_transpose,
        "lev-merge-split": lev_merge_split,
    }


def random_words(rng: random.Random, count, alphabet="abcd", max_len=8):
    words = set()
    while len(words) < count:
        words.add("".join(rng.choice(alphabet) for _ in range(rng.randint(1, max_len))))
    return sorted(words)
