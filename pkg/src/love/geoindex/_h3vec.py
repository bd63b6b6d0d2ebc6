"""Vectorized point-to-cell mapping over numpy arrays.

Bit-for-bit equivalent to the scalar path in ``_h3core`` (property-tested),
but processes whole coordinate arrays at once. Points landing on a
pentagonal base cell (none in the European operating region) fall back to
the scalar routine element-wise.
"""

from __future__ import annotations

import numpy as np

from . import _h3core
from ._tables import (
    BASE_CELL_CW_OFFSET,
    FACE_AXES_AZ_RADS_CII,
    FACE_CENTER_GEO,
    FACE_CENTER_POINT,
    FACE_IJK_BASE_CELLS,
    PENTAGON_BASE_CELLS,
)

_FACE_XYZ = np.array(FACE_CENTER_POINT)  # (20, 3)
_FACE_LAT = np.array([g[0] for g in FACE_CENTER_GEO])
_FACE_LNG = np.array([g[1] for g in FACE_CENTER_GEO])
_FACE_AZ0 = np.array([a[0] for a in FACE_AXES_AZ_RADS_CII])

_BASE_CELL = np.empty((20, 3, 3, 3), dtype=np.int64)
_BASE_ROT = np.empty((20, 3, 3, 3), dtype=np.int64)
for _f in range(20):
    for _i in range(3):
        for _j in range(3):
            for _k in range(3):
                _bc, _rot = FACE_IJK_BASE_CELLS[_f][_i][_j][_k]
                _BASE_CELL[_f, _i, _j, _k] = _bc
                _BASE_ROT[_f, _i, _j, _k] = _rot

_IS_PENTAGON = np.zeros(122, dtype=bool)
_IS_PENTAGON[list(PENTAGON_BASE_CELLS)] = True

# _CW_OFFSET[base, face]: face uses a clockwise offset system for this
# pentagonal base cell.
_CW_OFFSET = np.zeros((122, 20), dtype=bool)
for _b, _faces in BASE_CELL_CW_OFFSET.items():
    for _fc in _faces:
        _CW_OFFSET[_b, _fc] = True

# _CCW_ROT_PERM[n] maps a direction digit to itself rotated n * 60 deg ccw;
# same for _CW_ROT_PERM clockwise.
_CCW_ROT_PERM = np.empty((6, 7), dtype=np.int64)
_CW_ROT_PERM = np.empty((6, 7), dtype=np.int64)
_CCW_ROT_PERM[0] = _CW_ROT_PERM[0] = np.arange(7)
for _n in range(1, 6):
    _CCW_ROT_PERM[_n] = np.array(_h3core._DIGIT_ROT_CCW)[_CCW_ROT_PERM[_n - 1]]
    _CW_ROT_PERM[_n] = np.array(_h3core._DIGIT_ROT_CW)[_CW_ROT_PERM[_n - 1]]


def _round_half_away(q: np.ndarray) -> np.ndarray:
    return np.where(q >= 0.0, np.floor(q + 0.5), np.ceil(q - 0.5)).astype(np.int64)


def _hex2d_to_ijk(x: np.ndarray, y: np.ndarray):
    a1 = np.abs(x)
    a2 = np.abs(y)

    x2 = a2 / _h3core._SQRT3_2
    x1 = a1 + x2 / 2.0

    m1 = x1.astype(np.int64)
    m2 = x2.astype(np.int64)
    r1 = x1 - m1
    r2 = x2 - m2

    third = 1.0 / 3.0
    c1 = r1 < third
    c2 = (r1 >= third) & (r1 < 0.5)
    c3 = (r1 >= 0.5) & (r1 < 2.0 * third)

    i_add = np.select(
        [c1, c2, c3],
        [
            np.zeros_like(m1),
            (((1.0 - r1) <= r2) & (r2 < 2.0 * r1)).astype(np.int64),
            (((2.0 * r1 - 1.0) >= r2) | (r2 >= (1.0 - r1))).astype(np.int64),
        ],
        default=np.ones_like(m1),
    )
    j_add = np.select(
        [c1, c2 | c3],
        [
            (r2 >= (1.0 + r1) / 2.0).astype(np.int64),
            (r2 >= (1.0 - r1)).astype(np.int64),
        ],
        default=(r2 >= r1 / 2.0).astype(np.int64),
    )

    i = m1 + i_add
    j = m2 + j_add

    neg_x = x < 0.0
    if neg_x.any():
        offset = j % 2
        axis_i = (j + offset) // 2
        folded = i - (2 * (i - axis_i) + offset)
        i = np.where(neg_x, folded, i)

    neg_y = y < 0.0
    if neg_y.any():
        i = np.where(neg_y, i - (2 * j + 1) // 2, i)
        j = np.where(neg_y, -j, j)

    k = np.zeros_like(i)
    return _normalize(i, j, k)


def _normalize(i, j, k):
    m = np.minimum(np.minimum(i, j), k)
    return i - m, j - m, k - m


def _up_aperture7(i, j, k, ccw: bool):
    ai = i - k
    aj = j - k
    if ccw:
        ni = _round_half_away((3 * ai - aj) / 7.0)
        nj = _round_half_away((ai + 2 * aj) / 7.0)
    else:
        ni = _round_half_away((2 * ai + aj) / 7.0)
        nj = _round_half_away((3 * aj - ai) / 7.0)
    return _normalize(ni, nj, np.zeros_like(ni))


def _down_aperture7(i, j, k, ccw: bool):
    if ccw:
        ni = 3 * i + 1 * j + 0 * k
        nj = 0 * i + 3 * j + 1 * k
        nk = 1 * i + 0 * j + 3 * k
    else:
        ni = 3 * i + 0 * j + 1 * k
        nj = 1 * i + 3 * j + 0 * k
        nk = 0 * i + 1 * j + 3 * k
    return _normalize(ni, nj, nk)


def latlng_to_cell(
    lat_deg: np.ndarray, lng_deg: np.ndarray, res: int
) -> np.ndarray:
    """Cell indexes (int64 array) for coordinate arrays, all at one resolution."""
    lat = np.radians(np.asarray(lat_deg, dtype=np.float64))
    lng = np.radians(np.asarray(lng_deg, dtype=np.float64))
    if lat.shape != lng.shape:
        raise ValueError("latitude and longitude arrays must have the same shape")
    n = lat.size
    if n == 0:
        return np.empty(0, dtype=np.int64)
    lat = lat.ravel()
    lng = lng.ravel()

    # Closest icosahedron face by chord distance. The fold (strict <, first
    # minimum wins) and the operation order mirror the scalar path exactly.
    cos_lat = np.cos(lat)
    px = np.cos(lng) * cos_lat
    py = np.sin(lng) * cos_lat
    pz = np.sin(lat)
    face = np.zeros(n, dtype=np.int64)
    sqd = np.full(n, 5.0)
    for f in range(20):
        cx, cy, cz = _FACE_XYZ[f]
        d = (cx - px) ** 2 + (cy - py) ** 2 + (cz - pz) ** 2
        closer = d < sqd
        face[closer] = f
        sqd[closer] = d[closer]

    # Gnomonic projection into the face-local hex plane.
    r = np.arccos(np.clip(1.0 - sqd / 2.0, -1.0, 1.0))
    flat, flng = _FACE_LAT[face], _FACE_LNG[face]
    az = np.arctan2(
        np.cos(lat) * np.sin(lng - flng),
        np.cos(flat) * np.sin(lat)
        - np.sin(flat) * np.cos(lat) * np.cos(lng - flng),
    )
    theta = _FACE_AZ0[face] - az
    if _h3core._is_class3(res):
        theta = theta - _h3core._AP7_ROT_RADS
    scale = np.where(
        r < _h3core._EPSILON,
        0.0,
        np.tan(r) / _h3core._RES0_U_GNOMONIC * _h3core._SQRT7_POWERS[res],
    )
    i, j, k = _hex2d_to_ijk(scale * np.cos(theta), scale * np.sin(theta))

    # Reduce to the res-0 address, recording direction digits finest-first.
    bits = np.full(n, _h3core._set_resolution(_h3core._DEFAULT_CELL_INDEX, res), dtype=np.int64)
    for level in range(res, 0, -1):
        last_i, last_j, last_k = i, j, k
        ccw = _h3core._is_class3(level)
        i, j, k = _up_aperture7(i, j, k, ccw)
        ci, cj, ck = _down_aperture7(i, j, k, ccw)
        di, dj, dk = _normalize(last_i - ci, last_j - cj, last_k - ck)
        digit = (di << 2) | (dj << 1) | dk
        off = _h3core._digit_offset(level)
        bits = (bits & ~np.int64(0x7 << off)) | (digit << off)

    base = _BASE_CELL[face, i, j, k]
    rotations = _BASE_ROT[face, i, j, k]
    bits = (bits & ~np.int64(0x7F << 45)) | (base << 45)

    if res == 0:
        return bits

    offs = np.array(
        [_h3core._digit_offset(level) for level in range(1, res + 1)],
        dtype=np.int64,
    )

    # Rotate the digits into the base cell's own orientation. Hexagonal base
    # cells take plain ccw rotations; pentagonal ones first rotate out of the
    # deleted K subsequence, then apply rotations that themselves skip it.
    pent = _IS_PENTAGON[base]
    bits = _rotate_digits(bits, offs, np.where(pent, 0, rotations), _CCW_ROT_PERM)

    if pent.any():
        lead = _first_axe(bits, offs)
        need_k = pent & (lead == 1)
        if need_k.any():
            cw = need_k & _CW_OFFSET[base, face]
            bits = _rotate_digits(bits, offs, cw.astype(np.int64), _CW_ROT_PERM)
            bits = _rotate_digits(
                bits, offs, (need_k & ~cw).astype(np.int64), _CCW_ROT_PERM
            )
        remaining = np.where(pent, rotations, 0)
        while (remaining > 0).any():
            lead = _first_axe(bits, offs)
            step = np.where(remaining > 0, np.where(lead == 3, 2, 1), 0)
            bits = _rotate_digits(bits, offs, step, _CCW_ROT_PERM)
            remaining = remaining - (remaining > 0)

    return bits


def _first_axe(bits: np.ndarray, offs: np.ndarray) -> np.ndarray:
    """Leading non-center digit of each index (0 if all digits are center)."""
    lead = np.zeros_like(bits)
    for off in offs:  # offsets run coarsest-first, i.e. res 1 -> res
        digit = (bits >> off) & 0x7
        lead = np.where(lead == 0, digit, lead)
    return lead


def _rotate_digits(
    bits: np.ndarray, offs: np.ndarray, counts: np.ndarray, perm: np.ndarray
) -> np.ndarray:
    """Apply per-element 60-degree digit rotations (counts in 0..5)."""
    if not counts.any():
        return bits
    digits = (bits[:, None] >> offs[None, :]) & 0x7
    mapped = perm[counts[:, None], digits]
    cleared = bits & ~np.bitwise_or.reduce(np.int64(0x7) << offs)
    return cleared | np.bitwise_or.reduce(mapped << offs[None, :], axis=1)
