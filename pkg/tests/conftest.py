import functools

import pytest

from epiresolve import SearchBounds, enumerate_models, fig1, fig1_core


@functools.lru_cache(maxsize=None)
def model_list(max_states, agents, atoms):
    bounds = SearchBounds(max_states=max_states, agents=agents, atoms=atoms)
    return tuple(enumerate_models(bounds))


@pytest.fixture(scope="session")
def FIG1():
    return fig1()


@pytest.fixture(scope="session")
def CORE():
    return fig1_core()
