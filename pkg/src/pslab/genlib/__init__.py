from .fixtures import (FixtureFormatError, SeriesFixture, dumps_fixture, fixture_names,
                       fixture_series, get_fixture, load_fixture, loads_fixture, save_fixture)
from .generators import GENERATORS, gen_hypergeometric_2f1, gen_named, lacunary, w_to_v

__all__ = [
    "FixtureFormatError", "SeriesFixture", "dumps_fixture", "fixture_names", "fixture_series",
    "get_fixture", "load_fixture", "loads_fixture", "save_fixture",
    "GENERATORS", "gen_hypergeometric_2f1", "gen_named", "lacunary", "w_to_v",
]
