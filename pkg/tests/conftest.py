import pytest

from hapticbayes import (
    MaterialLibrary,
    MaterialParams,
    bundled_library_path,
    generate_builtin_scenarios,
    load_library,
)


@pytest.fixture(scope="session")
def lib():
    return load_library(bundled_library_path())


@pytest.fixture(scope="session")
def scenarios(lib):
    return generate_builtin_scenarios(lib)


@pytest.fixture(scope="session")
def toy_lib():
    """Two well-separated materials with near-zero spread: deterministic
    samples (a normal draw with std 1e-300 rounds to the mean exactly)."""
    return MaterialLibrary([
        MaterialParams("hard", 1.0, 1e-300, 2.0, 1e-300),
        MaterialParams("soft", 10.0, 1e-300, 20.0, 1e-300),
    ])
