import logging

from hypercop.logging import level_from_env, setup_logging


def test_level_from_env(monkeypatch):
    monkeypatch.delenv("HYPERCOP_LOG", raising=False)
    assert level_from_env() == logging.INFO
    assert level_from_env(logging.ERROR) == logging.ERROR

    monkeypatch.setenv("HYPERCOP_LOG", " Debug ")
    assert level_from_env() == logging.DEBUG
    monkeypatch.setenv("HYPERCOP_LOG", "error")
    assert level_from_env() == logging.ERROR


def test_unknown_level_falls_back(monkeypatch, caplog):
    monkeypatch.setenv("HYPERCOP_LOG", "loud")
    with caplog.at_level(logging.WARNING, logger="hypercop"):
        assert level_from_env() == logging.INFO
    assert "loud" in caplog.text


def test_setup_logging_keeps_one_handler():
    logger = setup_logging(level=logging.DEBUG)
    handlers = list(logger.handlers)
    again = setup_logging(level=logging.ERROR)
    assert again is logger
    assert again.handlers == handlers
    assert again.level == logging.ERROR
    setup_logging(level=logging.INFO)
