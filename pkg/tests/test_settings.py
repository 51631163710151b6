import pytest
from pydantic import ValidationError

from src.config.settings import LocalEntropyVariant, NmiAverage, Settings, StretchOrder, get_settings


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    names = (
        "HCSE_MAX_ROUNDS",
        "HCSE_LOG_LEVEL",
        "HCSE_NMI_AVERAGE",
        "HCSE_LOCAL_ENTROPY_VARIANT",
        "HCSE_STRETCH_ORDER",
    )
    for name in names:
        monkeypatch.delenv(name, raising=False)
    # Keep a developer's .env out of the way
    monkeypatch.chdir(tmp_path)


def test_defaults():
    settings = get_settings()

    assert settings.max_rounds == 12
    assert settings.local_entropy_variant == LocalEntropyVariant.CHILD_CUT
    assert settings.stretch_order == StretchOrder.FLATTENED
    assert settings.nmi_average == NmiAverage.ARITHMETIC
    assert settings.allow_height_two is False
    assert settings.log_level == "INFO"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HCSE_MAX_ROUNDS", "5")
    monkeypatch.setenv("HCSE_LOCAL_ENTROPY_VARIANT", "parent_cut")
    monkeypatch.setenv("HCSE_LOG_LEVEL", "debug")
    monkeypatch.setenv("HCSE_STRETCH_ORDER", "insertion")

    settings = get_settings()

    assert settings.max_rounds == 5
    assert settings.local_entropy_variant == LocalEntropyVariant.PARENT_CUT
    assert settings.stretch_order == StretchOrder.INSERTION
    assert settings.log_level == "DEBUG"


def test_env_file(tmp_path):
    (tmp_path / ".env").write_text("HCSE_NMI_AVERAGE=geometric\n", encoding="utf-8")

    assert get_settings().nmi_average == NmiAverage.GEOMETRIC


@pytest.mark.parametrize("field, value", [("log_level", "LOUD"), ("max_rounds", 2)])
def test_invalid_values(field, value):
    with pytest.raises(ValidationError):
        Settings(**{field: value})
