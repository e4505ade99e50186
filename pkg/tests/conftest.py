"""Shared fixtures: soil presets, wheel geometry, vehicle preset."""
import pytest

from terrasim.soil import load_preset
from terrasim.vehicle import load_vehicle_preset


@pytest.fixture(scope="session")
def clay():
    soil, _ = load_preset("clay")
    return soil


@pytest.fixture(scope="session")
def sand():
    soil, _ = load_preset("sand")
    return soil


@pytest.fixture(scope="session")
def wheel():
    return load_vehicle_preset("mrzr_like").wheel


@pytest.fixture(scope="session")
def vehicle():
    return load_vehicle_preset("mrzr_like")


