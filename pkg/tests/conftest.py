"""Shared fixtures: the builtin suite and session-cached sweep results."""

import pytest

from rapidnets import (
    DEFAULT_CONFIG,
    builtin_suite,
    fourier_applicable,
    fourier_sweep,
    mixed_profile,
)


class ProfileCache:
    """Lazily computed sweep profiles shared across test modules.

    Sweeps are the expensive part of the pipeline; keying them by net
    label keeps every module reading the same arrays.
    """

    def __init__(self, nets):
        self._nets = {n.label: n for n in nets}
        self._mixed = {}
        self._fourier = {}

    def labels(self):
        return tuple(self._nets)

    def net(self, key):
        hits = [lab for lab in self._nets if key in lab]
        if len(hits) != 1:
            raise KeyError(f"net key {key!r} matched {hits}")
        return self._nets[hits[0]]

    def mixed(self, key):
        label = self.net(key).label
        if label not in self._mixed:
            self._mixed[label] = mixed_profile(self.net(key), DEFAULT_CONFIG)
        return self._mixed[label]

    def fourier(self, key):
        net = self.net(key)
        if not fourier_applicable(net):
            return None
        if net.label not in self._fourier:
            self._fourier[net.label] = fourier_sweep(
                net,
                DEFAULT_CONFIG.eps_grid,
                max_l=DEFAULT_CONFIG.max_l,
                policy=DEFAULT_CONFIG.policy,
            )
        return self._fourier[net.label]


@pytest.fixture(scope="session")
def suite():
    return builtin_suite()


@pytest.fixture(scope="session")
def config():
    return DEFAULT_CONFIG


@pytest.fixture(scope="session")
def cache(suite):
    return ProfileCache(suite)
