"""Key and ciphertext files: one JSON document per file.

Integer payloads travel as decimal strings so consumers never hit the
53-bit float limit; scheme-1 float blocks use repr() strings, which
round-trip exactly.  Serialization is canonical (sorted keys, fixed
separators), so equal objects produce byte-identical files.
"""

from __future__ import annotations

import json

from .hadamard import HadamardArrayKey
from .schemes import (
    CiphertextStream,
    Scheme1Key,
    Scheme2Key,
    Scheme3Key,
    Scheme4Key,
    Scheme5Key,
    SchemeKey,
)

FORMAT_VERSION = 1


def _canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def key_to_json(key: SchemeKey) -> str:
    if isinstance(key, Scheme1Key):
        params = {"dct_size": key.dct_size, "permutation": list(key.permutation)}
        values = [str(v) for v in key.diagonal]
    elif isinstance(key, Scheme2Key):
        params = {}
        values = [str(v) for v in key.array.values]
    elif isinstance(key, Scheme3Key):
        params = {"pair_orders": [a.order for a, _ in key.pairs]}
        values = [str(v) for pair in key.pairs for arr in pair for v in arr.values]
    elif isinstance(key, Scheme4Key):
        params = {"hadamard_exponent": key.hadamard_exponent, "order": key.array_a.order}
        values = [str(v) for v in key.array_a.values + key.array_b.values]
    elif isinstance(key, Scheme5Key):
        params = {"orders": [arr.order for arr in key.arrays]}
        values = [str(v) for arr in key.arrays for v in arr.values]
    else:
        raise TypeError(f"not a scheme key: {type(key).__name__}")
    return _canonical(
        {
            "format_version": FORMAT_VERSION,
            "kind": "key",
            "scheme": key.scheme_id,
            "params": params,
            "values": values,
        }
    )


def key_from_json(text: str) -> SchemeKey:
    doc = json.loads(text)
    if doc.get("kind") != "key":
        raise ValueError("not a key document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {doc.get('format_version')}")
    scheme = doc["scheme"]
    params = doc["params"]
    values = [int(v) for v in doc["values"]]

    if scheme == 1:
        return Scheme1Key(
            dct_size=params["dct_size"],
            diagonal=tuple(values),
            permutation=tuple(params["permutation"]),
        )
    if scheme == 2:
        return Scheme2Key(array=HadamardArrayKey(8, tuple(values)))
    if scheme == 3:
        pairs = []
        pos = 0
        for order in params["pair_orders"]:
            a = HadamardArrayKey(order, tuple(values[pos : pos + order]))
            m = HadamardArrayKey(order, tuple(values[pos + order : pos + 2 * order]))
            pairs.append((a, m))
            pos += 2 * order
        return Scheme3Key(pairs=tuple(pairs))
    if scheme == 4:
        order = params["order"]
        return Scheme4Key(
            hadamard_exponent=params["hadamard_exponent"],
            array_a=HadamardArrayKey(order, tuple(values[:order])),
            array_b=HadamardArrayKey(order, tuple(values[order:])),
        )
    if scheme == 5:
        arrays = []
        pos = 0
        for order in params["orders"]:
            arrays.append(HadamardArrayKey(order, tuple(values[pos : pos + order])))
            pos += order
        return Scheme5Key(arrays=tuple(arrays))
    raise ValueError(f"unknown scheme {scheme}")


def ciphertext_to_json(stream: CiphertextStream) -> str:
    if stream.scheme == 1:
        blocks = [[repr(float(v)) for v in block] for block in stream.blocks]
    else:
        blocks = [[str(int(v)) for v in block] for block in stream.blocks]
    return _canonical(
        {
            "format_version": FORMAT_VERSION,
            "kind": "ciphertext",
            "scheme": stream.scheme,
            "block_size": stream.block_size,
            "message_length": stream.message_length,
            "blocks": blocks,
        }
    )


def ciphertext_from_json(text: str) -> CiphertextStream:
    doc = json.loads(text)
    if doc.get("kind") != "ciphertext":
        raise ValueError("not a ciphertext document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {doc.get('format_version')}")
    parse = float if doc["scheme"] == 1 else int
    return CiphertextStream(
        scheme=doc["scheme"],
        block_size=doc["block_size"],
        message_length=doc["message_length"],
        blocks=tuple(tuple(parse(v) for v in block) for block in doc["blocks"]),
    )


def write_key(key: SchemeKey, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(key_to_json(key))


def read_key(path) -> SchemeKey:
    with open(path) as fh:
        return key_from_json(fh.read())


def write_ciphertext(stream: CiphertextStream, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(ciphertext_to_json(stream))


def read_ciphertext(path) -> CiphertextStream:
    with open(path) as fh:
        return ciphertext_from_json(fh.read())
