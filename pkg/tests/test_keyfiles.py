import pytest

from framecipher.hadamard import HadamardArrayKey
from framecipher.keyfiles import (
    ciphertext_from_json,
    ciphertext_to_json,
    key_from_json,
    key_to_json,
    read_ciphertext,
    read_key,
    write_ciphertext,
    write_key,
)
from framecipher.schemes import GarbageSpec, Scheme5Key, encode, keygen


def sample_keys():
    return [
        keygen(1, seed=1, value_range=(1, 10), dct_size=8),
        keygen(2, seed=2, value_range=(1, 9)),
        keygen(3, seed=3, value_range=(1, 9), orders=[4, 4]),
        keygen(4, seed=4, value_range=(1, 9), orders=[4], hadamard_exponent=2),
        keygen(5, seed=5, value_range=(5, 7), orders=[4, 4, 4]),
    ]


class TestKeyRoundTrip:
    @pytest.mark.parametrize("key", sample_keys(), ids=lambda k: f"scheme{k.scheme_id}")
    def test_parse_serialize_identity(self, key):
        text = key_to_json(key)
        assert key_from_json(text) == key
        assert key_to_json(key_from_json(text)) == text  # byte-identical

    def test_files(self, tmp_path):
        for key in sample_keys():
            path = tmp_path / f"k{key.scheme_id}.json"
            write_key(key, path)
            assert read_key(path) == key

    def test_huge_values_survive(self):
        big = 10**40 + 1
        key = Scheme5Key(arrays=(HadamardArrayKey(2, (big, big - 2)),))
        assert key_from_json(key_to_json(key)) == key

    def test_wrong_kind_rejected(self):
        with pytest.raises(ValueError):
            key_from_json('{"kind":"ciphertext","format_version":1}')

    def test_wrong_version_rejected(self):
        with pytest.raises(ValueError):
            key_from_json('{"kind":"key","format_version":99,"scheme":2,"params":{},"values":[]}')


class TestCiphertextRoundTrip:
    def test_integer_scheme(self, tmp_path):
        key = keygen(5, seed=6, value_range=(5, 7), orders=[4])
        stream = encode(key, b"round trip", GarbageSpec(128, 7))
        assert ciphertext_from_json(ciphertext_to_json(stream)) == stream
        path = tmp_path / "ct.json"
        write_ciphertext(stream, path)
        assert read_ciphertext(path) == stream

    def test_float_scheme(self):
        key = keygen(1, seed=8, value_range=(1, 10), dct_size=8)
        stream = encode(key, b"floats", GarbageSpec(1000, 9))
        again = ciphertext_from_json(ciphertext_to_json(stream))
        assert again == stream  # repr() round-trips floats exactly

    def test_huge_blocks_survive(self):
        key = Scheme5Key(arrays=(HadamardArrayKey(2, (10**30, 1)),))
        stream = encode(key, b"x", GarbageSpec(10**25, 3))
        assert ciphertext_from_json(ciphertext_to_json(stream)) == stream

    def test_wrong_kind_rejected(self):
        with pytest.raises(ValueError):
            ciphertext_from_json('{"kind":"key","format_version":1}')
