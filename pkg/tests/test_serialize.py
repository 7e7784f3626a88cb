import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opval.dyadic import DyadicInterval
from opval.errors import ParseError
from opval.serialize import (
    canonical_dumps,
    field_from_dict,
    field_to_dict,
    step_from_dict,
    step_to_dict,
)
from opval.wavelets import analyze

from conftest import random_step


def test_step_roundtrip_is_exact():
    f = random_step(1, 3, 4, lo=-1, hi=2)
    doc = step_to_dict(f)
    # through actual JSON text: repr round-trips doubles exactly
    back = step_from_dict(json.loads(json.dumps(doc)))
    assert back.same_grid(f)
    assert np.array_equal(back.cells, f.cells)


def test_field_roundtrip_is_exact():
    c = analyze(random_step(2, 2, 4))
    doc = field_to_dict(c)
    back = field_from_dict(json.loads(json.dumps(doc)))
    assert back.entries.keys() == c.entries.keys()
    for i in c.entries:
        assert np.array_equal(back.entries[i], c.entries[i])
    assert np.array_equal(back.scaling, c.scaling)


def test_parse_errors_name_the_field():
    doc = step_to_dict(random_step(3, 1, 2))
    bad = dict(doc)
    bad["cells"] = doc["cells"][:-1]
    with pytest.raises(ParseError) as err:
        step_from_dict(bad)
    assert err.value.field == "cells"

    bad = json.loads(json.dumps(doc))
    bad["cells"][1][0][0] = [1.0]  # not a [re, im] pair
    with pytest.raises(ParseError) as err:
        step_from_dict(bad)
    assert err.value.field == "cells[1][0][0]"

    with pytest.raises(ParseError) as err:
        step_from_dict({"dim": 1, "depth": 2, "support": {"lo": 0}, "cells": []})
    assert err.value.field == "support.hi"

    with pytest.raises(ParseError) as err:
        step_from_dict({"dim": 1, "depth": "x", "support": {"lo": 0, "hi": 1}, "cells": []})
    assert err.value.field == "depth"


def test_non_finite_rejected():
    doc = step_to_dict(random_step(4, 1, 2))
    bad = json.loads(json.dumps(doc))
    bad["cells"][0][0][0] = [float("nan"), 0.0]
    with pytest.raises(ParseError):
        step_from_dict(bad)


def test_canonical_dumps_shape():
    text = canonical_dumps({"b": 1.5, "a": [True, None, 2], "c": "x\"y"})
    assert text == '{"a": [true, null, 2], "b": 1.5, "c": "x\\"y"}'


def test_canonical_dumps_17_digits():
    x = 0.1 + 0.2
    assert canonical_dumps(x) == format(x, ".17g")
    assert canonical_dumps(2.0) == "2.0"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_canonical_float_roundtrip(x):
    assert float(json.loads(canonical_dumps(x))) == x


@given(
    st.recursive(
        st.one_of(
            st.none(),
            st.booleans(),
            st.integers(min_value=-(10 ** 12), max_value=10 ** 12),
            st.floats(allow_nan=False, allow_infinity=False),
            st.text(max_size=8),
        ),
        lambda children: st.one_of(
            st.lists(children, max_size=4),
            st.dictionaries(st.text(max_size=6), children, max_size=4),
        ),
        max_leaves=12,
    )
)
def test_canonical_dumps_is_valid_json(obj):
    parsed = json.loads(canonical_dumps(obj))

    def normal(o):
        if isinstance(o, dict):
            return {k: normal(v) for k, v in o.items()}
        if isinstance(o, list):
            return [normal(v) for v in o]
        return o

    assert parsed == normal(obj)
