from pathlib import Path

import pytest

from fcm_bias import FeatureSchema, build_dataset, build_weight_matrix

REPO = Path(__file__).resolve().parents[1]
GERMAN_CSV = REPO / "data" / "german" / "german_credit.csv"
GERMAN_SCHEMA = REPO / "data" / "german" / "schema.json"
GERMAN_GROUP_SCHEMA = REPO / "data" / "german" / "schema_groups.json"
SCENARIO_DIR = REPO / "data" / "scenarios"


@pytest.fixture(scope="session")
def german_schema():
    return FeatureSchema.from_json_file(GERMAN_SCHEMA)


@pytest.fixture(scope="session")
def german_dataset(german_schema):
    return build_dataset(GERMAN_CSV, german_schema)


@pytest.fixture(scope="session")
def german_matrix(german_dataset):
    return build_weight_matrix(german_dataset)


@pytest.fixture(scope="session")
def german_group_schema():
    return FeatureSchema.from_json_file(GERMAN_GROUP_SCHEMA)


@pytest.fixture(scope="session")
def german_group_dataset(german_group_schema):
    return build_dataset(GERMAN_CSV, german_group_schema)


@pytest.fixture(scope="session")
def german_group_matrix(german_group_dataset):
    return build_weight_matrix(german_group_dataset)
