import pytest

from mubsic import siclab


@pytest.fixture(scope="session")
def searched():
    """Factory for cached deterministic fiducial searches, keyed by (d, seed)."""
    cache = {}

    def get(d: int, seed: int = 0, restarts: int = 200) -> siclab.SearchResult:
        key = (d, seed, restarts)
        if key not in cache:
            cfg = siclab.SearchConfig(seed=seed, restarts=restarts)
            cache[key] = siclab.search_fiducial(d, cfg)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def searched_mu_pom(searched):
    """Cached (family, mu_pom, spectra table, column report) per dimension."""
    cache = {}

    def get(d: int):
        if d not in cache:
            fam = siclab.generate_hw_sic(searched(d).fiducial)
            mpf = siclab.extract_mu_pom(fam)
            table = siclab.spectra_table(mpf)
            report = siclab.assert_column_constant(table)
            cache[d] = (fam, mpf, table, report)
        return cache[d]

    return get
