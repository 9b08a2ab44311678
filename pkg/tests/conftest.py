import os

import pytest

from nomkit import Dataset, normalize_titanic, parse_csv

DATA_PATH = os.path.join(os.path.dirname(__file__), "..", "data", "train.csv")


def require_train_csv() -> str:
    if not os.path.exists(DATA_PATH):
        pytest.skip(
            "data/train.csv not present; run scripts/fetch_training_data.py"
        )
    return DATA_PATH


@pytest.fixture(scope="session")
def train_csv_path() -> str:
    return require_train_csv()


@pytest.fixture(scope="session")
def raw_table(train_csv_path):
    with open(train_csv_path, encoding="utf-8") as fh:
        return parse_csv(fh)


@pytest.fixture(scope="session")
def titanic(raw_table) -> Dataset:
    return normalize_titanic(raw_table)
