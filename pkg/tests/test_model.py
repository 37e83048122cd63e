import json

import numpy as np
import pytest
from pydantic import ValidationError

from rcrm_ia.errors import ContractViolation, InvalidConfig
from rcrm_ia.model.channels import (
    ChannelSet,
    gen_cellular_channels,
    gen_iid_channels,
    gen_symbol_extension_channels,
    generate_channels,
    is_proper,
    proper_slack,
)
from rcrm_ia.model.serialization import channels_from_json, channels_to_json, dump_channels, load_channels
from rcrm_ia.schemas.system import CellularConfig, ChannelKind, SystemConfig, load_system_config
from rcrm_ia.utils.seeding import derive_trial_seed, make_rng


def test_system_config_rejects_too_many_streams():
    with pytest.raises(ValidationError):
        SystemConfig(K=3, M_t=2, M_r=4, d=3)
    with pytest.raises(InvalidConfig):
        load_system_config({"K": 3, "M_t": 2, "M_r": 4, "d": 3})


def test_symbol_extension_dimensions_follow_slots():
    cfg = SystemConfig(K=3, M_t=2, M_r=2, d=1, channel_kind="diagonal_extension", extension_slots=2)
    assert (cfg.M_t, cfg.M_r) == (2, 2)
    with pytest.raises(ValidationError):
        SystemConfig(K=3, M_t=3, M_r=2, d=1, channel_kind="diagonal_extension", extension_slots=2)
    with pytest.raises(ValidationError):
        SystemConfig(K=3, d=1, channel_kind="diagonal_extension")


def test_load_system_config_picks_cellular_class():
    cfg = load_system_config({"K": 3, "M_t": 6, "M_r": 4, "d": 2, "channel_kind": "cellular"})
    assert isinstance(cfg, CellularConfig)
    assert cfg.per_user_antennas == 3
    assert list(cfg.user_rows(1)) == [3, 4, 5]
    assert cfg.zero_rows(0) == [3, 4, 5]
    with pytest.raises(InvalidConfig):
        load_system_config({"K": 3, "M_t": 5, "M_r": 4, "d": 2, "channel_kind": "cellular"})


@pytest.mark.parametrize("M_r,M_t,d,K,proper", [
    (4, 8, 1, 3, True),
    (4, 8, 3, 3, True),
    (6, 6, 3, 3, True),
    (4, 18, 2, 10, True),
    (2, 2, 1, 4, False),
])
def test_properness(M_r, M_t, d, K, proper):
    cfg = SystemConfig(K=K, M_t=M_t, M_r=M_r, d=d)
    assert is_proper(cfg) is proper
    assert proper_slack(cfg) == M_r + M_t - d * (K + 1)


def test_iid_channels_shape_and_determinism(cfg_4x8_d1):
    a = gen_iid_channels(cfg_4x8_d1, make_rng(5))
    b = gen_iid_channels(cfg_4x8_d1, make_rng(5))
    assert a.H.shape == (3, 3, 4, 8)
    assert np.array_equal(a.H, b.H)
    assert np.all(a.H.imag == 0)
    assert not a.H.flags.writeable


def test_complex_channels_have_imaginary_parts():
    cfg = SystemConfig(K=2, M_t=3, M_r=3, d=1, complex_gaussian=True)
    assert np.any(gen_iid_channels(cfg, make_rng(1)).H.imag != 0)


def test_iid_generator_refuses_other_kinds(cfg_cellular):
    with pytest.raises(ContractViolation):
        gen_iid_channels(cfg_cellular, make_rng(0))


def test_symbol_extension_channels_are_diagonal():
    cfg = SystemConfig(K=3, d=1, channel_kind="diagonal_extension", extension_slots=2)
    ch = gen_symbol_extension_channels(cfg, 2, make_rng(0))
    assert ch.kind == ChannelKind.DIAGONAL_EXTENSION
    off = ch.H * (1 - np.eye(2))
    assert np.max(np.abs(off)) == 0.0
    with pytest.raises(InvalidConfig):
        gen_symbol_extension_channels(SystemConfig(K=3, M_t=2, M_r=2, d=2), 1, make_rng(0))


def test_channel_set_rejects_non_diagonal_extension():
    H = np.ones((2, 2, 2, 2))
    with pytest.raises(ValidationError):
        ChannelSet(H=H, kind=ChannelKind.DIAGONAL_EXTENSION)


def test_cellular_blocks(cfg_cellular):
    ch = gen_cellular_channels(cfg_cellular, make_rng(2))
    assert ch.H.shape == (3, 3, 4, 6)
    np.testing.assert_array_equal(ch.block(0, 1, 1, 2), ch.H[0, 1][:, 3:6])
    assert generate_channels(cfg_cellular, make_rng(2)).kind == ChannelKind.CELLULAR


def test_reverse_channel(channels_4x8):
    np.testing.assert_array_equal(channels_4x8.reverse(0, 2), channels_4x8.H[2, 0].conj().T)


def test_check_matches(channels_4x8):
    with pytest.raises(ContractViolation):
        channels_4x8.check_matches(SystemConfig(K=3, M_t=6, M_r=6, d=1))


def test_channel_json_round_trip_is_exact(tmp_path):
    cfg = SystemConfig(K=2, M_t=3, M_r=2, d=1, complex_gaussian=True)
    sets = [gen_iid_channels(cfg, make_rng(s)) for s in range(3)]
    path = tmp_path / "dump" / "channels.json"
    dump_channels(str(path), sets)
    loaded = load_channels(str(path))
    assert len(loaded) == 3
    for a, b in zip(sets, loaded):
        assert np.array_equal(a.H, b.H)
    doc = json.loads(path.read_text())
    assert doc["schema"] == 1
    assert doc["trials"][0]["matrices"][1] == channels_to_json(sets[0])["matrices"][1]


def test_channel_json_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_channels(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 2, "trials": []}')
    with pytest.raises(InvalidConfig):
        load_channels(str(bad))
    with pytest.raises(InvalidConfig):
        channels_from_json({"K": 2, "M_r": 1, "M_t": 1, "kind": "generic", "matrices": [[[[1, 0]]]]})


def test_trial_seeds_are_stable_and_distinct():
    seeds = [derive_trial_seed(2011, t) for t in range(50)]
    assert len(set(seeds)) == 50
    assert seeds[0] == derive_trial_seed(2011, 0)
    assert all(0 <= s < 2**64 for s in seeds)
    assert derive_trial_seed(1, 0) != derive_trial_seed(0, 1)
