"""Scalar implementation of the H3 point-to-cell mapping.

Ports the published H3 grid algorithms (gnomonic projection onto the
icosahedron, aperture-7 hex quantization, 64-bit index packing) for the
subset this project needs: latlng -> cell, cell -> center latlng, parent,
and index validation. Conformance is pinned by golden vectors computed
with the reference H3 implementation (see tests/data/README.md).

All angles here are radians unless a name says otherwise; cell indexes are
plain Python ints holding the 64-bit H3 bit layout.
"""

from __future__ import annotations

import math

from ._tables import (
    BASE_CELL_CW_OFFSET,
    BASE_CELL_HOME,
    FACE_AXES_AZ_RADS_CII,
    FACE_CENTER_GEO,
    FACE_CENTER_POINT,
    FACE_IJK_BASE_CELLS,
    FACE_NEIGHBORS,
    PENTAGON_BASE_CELLS,
)

EARTH_RADIUS_KM = 6371.007180918475  # authalic sphere radius used by H3

_EPSILON = 1.0e-16
_RES0_U_GNOMONIC = 0.381966011250105
_AP7_ROT_RADS = 0.3334731722518321  # asin(sqrt(3/28))
_SQRT3_2 = 0.8660254037844386

# sqrt(7) ** res, matching the reference implementation bit-for-bit.
_SQRT7_POWERS = (
    1.0,
    2.6457513110645907,
    7.0,
    18.520259177452136,
    49.00000000000001,
    129.64181424216497,
    343.0000000000001,
    907.4926996951549,
)

# Base index: mode "cell", resolution 0, base cell 0, all digits unused.
_DEFAULT_CELL_INDEX = 0x08001FFFFFFFFFFF

# Maximum i+j+k on a face before the address overflows onto a neighboring
# face, and the translation scale, both per Class II resolution.
_MAX_DIM_BY_CII_RES = (2, -1, 14, -1, 98, -1, 686, -1, 4802)
_UNIT_SCALE_BY_CII_RES = (1, -1, 7, -1, 49, -1, 343, -1, 2401)

# Direction digits: 0 center, 1 K, 2 J, 3 JK, 4 I, 5 IK, 6 IJ.
_DIGIT_ROT_CCW = (0, 5, 3, 1, 6, 4, 2)
_DIGIT_ROT_CW = (0, 3, 6, 2, 5, 1, 4)

_QUADRANT_IJ, _QUADRANT_KI, _QUADRANT_JK = 1, 2, 3


def _pos_angle(angle: float) -> float:
    if angle < 0.0:
        return angle + 2.0 * math.pi
    if angle >= 2.0 * math.pi:
        return angle - 2.0 * math.pi
    return angle


def _round_half_away(x: float) -> int:
    # round() in Python rounds half to even; the reference rounds half away
    # from zero. Halves cannot occur in the aperture-7 quotients, but stay
    # faithful anyway.
    return int(math.floor(x + 0.5)) if x >= 0.0 else int(math.ceil(x - 0.5))


def _azimuth(lat1: float, lng1: float, lat2: float, lng2: float) -> float:
    return math.atan2(
        math.cos(lat2) * math.sin(lng2 - lng1),
        math.cos(lat1) * math.sin(lat2)
        - math.sin(lat1) * math.cos(lat2) * math.cos(lng2 - lng1),
    )


def _closest_face(lat: float, lng: float) -> tuple[int, float]:
    """Icosahedron face nearest to the point, and squared chord distance."""
    cos_lat = math.cos(lat)
    x = math.cos(lng) * cos_lat
    y = math.sin(lng) * cos_lat
    z = math.sin(lat)

    best_face, best_sqd = 0, 5.0
    for face in range(20):
        cx, cy, cz = FACE_CENTER_POINT[face]
        sqd = (cx - x) ** 2 + (cy - y) ** 2 + (cz - z) ** 2
        if sqd < best_sqd:
            best_face, best_sqd = face, sqd
    return best_face, best_sqd


def _hex2d_to_ijk(x: float, y: float) -> tuple[int, int, int]:
    """Quantize cartesian hex-plane coordinates into the containing cell."""
    a1 = abs(x)
    a2 = abs(y)

    x2 = a2 / _SQRT3_2
    x1 = a1 + x2 / 2.0

    m1 = int(x1)
    m2 = int(x2)

    r1 = x1 - m1
    r2 = x2 - m2

    if r1 < 0.5:
        if r1 < 1.0 / 3.0:
            i = m1
            j = m2 + (1 if r2 >= (1.0 + r1) / 2.0 else 0)
        else:
            i = m1 + (1 if (1.0 - r1) <= r2 < (2.0 * r1) else 0)
            j = m2 + (1 if r2 >= (1.0 - r1) else 0)
    elif r1 < 2.0 / 3.0:
        j = m2 + (1 if r2 >= (1.0 - r1) else 0)
        i = m1 + (1 if (2.0 * r1 - 1.0) >= r2 or r2 >= (1.0 - r1) else 0)
    else:
        i = m1 + 1
        j = m2 + (1 if r2 >= (r1 / 2.0) else 0)

    # Fold across the axes for negative x / y.
    if x < 0.0:
        offset = j % 2
        axis_i = (j + offset) // 2
        diff = i - axis_i
        i -= 2 * diff + offset

    if y < 0.0:
        i -= (2 * j + 1) // 2
        j = -j

    return _ijk_normalize(i, j, 0)


def _ijk_normalize(i: int, j: int, k: int) -> tuple[int, int, int]:
    m = min(i, j, k)
    return i - m, j - m, k - m


def _up_aperture7(i: int, j: int, k: int, ccw: bool) -> tuple[int, int, int]:
    """Parent cell of an ijk address in the next coarser aperture-7 grid."""
    ai = i - k
    aj = j - k
    if ccw:
        ni = _round_half_away((3 * ai - aj) / 7.0)
        nj = _round_half_away((ai + 2 * aj) / 7.0)
    else:
        ni = _round_half_away((2 * ai + aj) / 7.0)
        nj = _round_half_away((3 * aj - ai) / 7.0)
    return _ijk_normalize(ni, nj, 0)


def _down_aperture7(i: int, j: int, k: int, ccw: bool) -> tuple[int, int, int]:
    """Center of the cell in the next finer aperture-7 grid."""
    if ccw:
        iv, jv, kv = (3, 0, 1), (1, 3, 0), (0, 1, 3)
    else:
        iv, jv, kv = (3, 1, 0), (0, 3, 1), (1, 0, 3)
    return _ijk_normalize(
        i * iv[0] + j * jv[0] + k * kv[0],
        i * iv[1] + j * jv[1] + k * kv[1],
        i * iv[2] + j * jv[2] + k * kv[2],
    )


def _ijk_rotate60(i: int, j: int, k: int, ccw: bool) -> tuple[int, int, int]:
    if ccw:
        iv, jv, kv = (1, 1, 0), (0, 1, 1), (1, 0, 1)
    else:
        iv, jv, kv = (1, 0, 1), (1, 1, 0), (0, 1, 1)
    return _ijk_normalize(
        i * iv[0] + j * jv[0] + k * kv[0],
        i * iv[1] + j * jv[1] + k * kv[1],
        i * iv[2] + j * jv[2] + k * kv[2],
    )


def _is_class3(res: int) -> bool:
    return res % 2 == 1


# --- 64-bit index packing ---------------------------------------------------


def _digit_offset(res: int) -> int:
    return 3 * (15 - res)


def get_resolution(cell: int) -> int:
    """Resolution encoded in a cell index."""
    return (cell >> 52) & 0xF


def get_base_cell(cell: int) -> int:
    return (cell >> 45) & 0x7F


def _get_digit(cell: int, res: int) -> int:
    return (cell >> _digit_offset(res)) & 0x7


def _set_digit(cell: int, res: int, digit: int) -> int:
    off = _digit_offset(res)
    return (cell & ~(0x7 << off)) | (digit << off)


def _set_resolution(cell: int, res: int) -> int:
    return (cell & ~(0xF << 52)) | (res << 52)


def _set_base_cell(cell: int, base: int) -> int:
    return (cell & ~(0x7F << 45)) | (base << 45)


def _first_axe(cell: int) -> int:
    """Leading non-center direction digit, or 0 if none."""
    for res in range(1, get_resolution(cell) + 1):
        digit = _get_digit(cell, res)
        if digit != 0:
            return digit
    return 0


def _rotate60(cell: int, count: int, ccw: bool) -> int:
    lut = _DIGIT_ROT_CCW if ccw else _DIGIT_ROT_CW
    for _ in range(count):
        for res in range(1, get_resolution(cell) + 1):
            cell = _set_digit(cell, res, lut[_get_digit(cell, res)])
    return cell


def _pentagon_rotate60_ccw(cell: int) -> int:
    # Skip the deleted K subsequence: a leading JK would land on K after one
    # rotation, so rotate twice in that case.
    count = 2 if _first_axe(cell) == 3 else 1
    return _rotate60(cell, count, ccw=True)


# --- latlng -> cell ----------------------------------------------------------


def _geo_to_face_ijk(
    lat: float, lng: float, res: int
) -> tuple[int, tuple[int, int, int]]:
    face, sqd = _closest_face(lat, lng)

    r = math.acos(1.0 - sqd / 2.0)
    if r < _EPSILON:
        return face, (0, 0, 0)

    face_lat, face_lng = FACE_CENTER_GEO[face]
    theta = FACE_AXES_AZ_RADS_CII[face][0] - _azimuth(face_lat, face_lng, lat, lng)
    if _is_class3(res):
        theta -= _AP7_ROT_RADS

    r = (math.tan(r) / _RES0_U_GNOMONIC) * _SQRT7_POWERS[res]
    return face, _hex2d_to_ijk(r * math.cos(theta), r * math.sin(theta))


def _face_ijk_to_cell(face: int, ijk: tuple[int, int, int], res: int) -> int:
    cell = _set_resolution(_DEFAULT_CELL_INDEX, res)

    if res == 0:
        base, _rot = FACE_IJK_BASE_CELLS[face][ijk[0]][ijk[1]][ijk[2]]
        return _set_base_cell(cell, base)

    # Walk from the finest resolution up to res 1, recording one direction
    # digit per step and reducing ijk to the res-0 address.
    i, j, k = ijk
    for r in range(res, 0, -1):
        last = (i, j, k)
        ccw = _is_class3(r)
        i, j, k = _up_aperture7(i, j, k, ccw)
        ci, cj, ck = _down_aperture7(i, j, k, ccw)
        di, dj, dk = _ijk_normalize(last[0] - ci, last[1] - cj, last[2] - ck)
        cell = _set_digit(cell, r, (di << 2) | (dj << 1) | dk)

    base, rotations = FACE_IJK_BASE_CELLS[face][i][j][k]
    cell = _set_base_cell(cell, base)

    if base in PENTAGON_BASE_CELLS:
        if _first_axe(cell) == 1:  # K axis falls in the deleted subsequence
            if face in BASE_CELL_CW_OFFSET.get(base, ()):
                cell = _rotate60(cell, 1, ccw=False)
            else:
                cell = _rotate60(cell, 1, ccw=True)
        for _ in range(rotations):
            cell = _pentagon_rotate60_ccw(cell)
    else:
        cell = _rotate60(cell, rotations, ccw=True)

    return cell


def latlng_to_cell(lat_deg: float, lng_deg: float, res: int) -> int:
    """Cell index containing the point at the given resolution (0..7)."""
    lat = math.radians(lat_deg)
    lng = math.radians(lng_deg)
    face, ijk = _geo_to_face_ijk(lat, lng, res)
    return _face_ijk_to_cell(face, ijk, res)


# --- cell -> center latlng ---------------------------------------------------


def _adjust_overage_class2(
    face: int, ijk: tuple[int, int, int], class2_res: int, is_pent4: bool
) -> tuple[int, tuple[int, int, int], bool]:
    """Wrap an on-face address onto the neighboring face if it overflows."""
    i, j, k = ijk
    max_dim = _MAX_DIM_BY_CII_RES[class2_res]

    if i + j + k <= max_dim:
        return face, ijk, False

    if k > 0:
        if j > 0:
            orient = FACE_NEIGHBORS[face][_QUADRANT_JK]
        else:
            if is_pent4:
                # Rotate out of the pentagon's missing sequence, pivoting
                # around the triangle center.
                i, j, k = _ijk_rotate60(i - max_dim, j, k, ccw=False)
                i += max_dim
            orient = FACE_NEIGHBORS[face][_QUADRANT_KI]
    else:
        orient = FACE_NEIGHBORS[face][_QUADRANT_IJ]

    new_face, translate, ccw_rot60 = orient
    for _ in range(ccw_rot60):
        i, j, k = _ijk_rotate60(i, j, k, ccw=True)

    scale = _UNIT_SCALE_BY_CII_RES[class2_res]
    i, j, k = _ijk_normalize(
        i + translate[0] * scale, j + translate[1] * scale, k + translate[2] * scale
    )
    return new_face, (i, j, k), True


def _cell_to_face_ijk(cell: int) -> tuple[int, tuple[int, int, int]]:
    base = get_base_cell(cell)
    res = get_resolution(cell)
    bits = cell

    is_pentagon = base in PENTAGON_BASE_CELLS
    if is_pentagon and _first_axe(bits) == 5:  # IK axis
        bits = _rotate60(bits, 1, ccw=False)

    face, (i, j, k) = BASE_CELL_HOME[base]
    possible_overage = is_pentagon or res != 0 or (i, j, k) != (0, 0, 0)

    for r in range(1, res + 1):
        ccw = _is_class3(r)
        i, j, k = _down_aperture7(i, j, k, ccw)
        digit = _get_digit(bits, r)
        i, j, k = _ijk_normalize(
            i + ((digit >> 2) & 1), j + ((digit >> 1) & 1), k + (digit & 1)
        )

    if not possible_overage:
        return face, (i, j, k)

    original = (i, j, k)
    if _is_class3(res):
        i, j, k = _down_aperture7(i, j, k, ccw=False)
        class2_res = res + 1
    else:
        class2_res = res

    is_pent4 = is_pentagon and _first_axe(bits) == 4  # I axis
    face, (i, j, k), moved = _adjust_overage_class2(
        face, (i, j, k), class2_res, is_pent4
    )
    if moved:
        if is_pentagon:
            while True:
                face, (i, j, k), again = _adjust_overage_class2(
                    face, (i, j, k), class2_res, False
                )
                if not again:
                    break
        if class2_res != res:
            i, j, k = _up_aperture7(i, j, k, ccw=False)
    elif class2_res != res:
        i, j, k = original

    return face, (i, j, k)


def _coord_at(
    lat: float, lng: float, azimuth: float, distance: float
) -> tuple[float, float]:
    """Point at the given azimuth and great-circle distance (radians)."""
    if distance < _EPSILON:
        return lat, lng

    azimuth = _pos_angle(azimuth)
    due_north = azimuth < _EPSILON
    due_south = abs(azimuth - math.pi) < _EPSILON

    if due_north or due_south:
        new_lat = lat + distance if due_north else lat - distance
    else:
        s = math.sin(lat) * math.cos(distance) + math.cos(lat) * math.sin(
            distance
        ) * math.cos(azimuth)
        new_lat = math.asin(min(1.0, max(-1.0, s)))

    if abs(new_lat - math.pi / 2.0) < _EPSILON:
        return math.pi / 2.0, 0.0
    if abs(new_lat + math.pi / 2.0) < _EPSILON:
        return -math.pi / 2.0, 0.0

    if due_north or due_south:
        new_lng = lng
    else:
        sin_lng = min(1.0, max(-1.0, math.sin(azimuth) * math.sin(distance) / math.cos(new_lat)))
        cos_lng = (
            (math.cos(distance) + math.sin(lat) * math.sin(-new_lat))
            / math.cos(lat)
            / math.cos(new_lat)
        )
        new_lng = lng + math.atan2(sin_lng, cos_lng)

    while new_lng > math.pi:
        new_lng -= 2.0 * math.pi
    while new_lng < -math.pi:
        new_lng += 2.0 * math.pi
    return new_lat, new_lng


def cell_to_latlng(cell: int) -> tuple[float, float]:
    """Center point of a cell, in degrees."""
    res = get_resolution(cell)
    face, (i, j, k) = _cell_to_face_ijk(cell)

    ai = i - k
    aj = j - k
    x = ai - 0.5 * aj
    y = aj * _SQRT3_2

    r = math.hypot(x, y)
    if r < _EPSILON:
        lat, lng = FACE_CENTER_GEO[face]
        return math.degrees(lat), math.degrees(lng)

    r = math.atan((r / _SQRT7_POWERS[res]) * _RES0_U_GNOMONIC)

    theta = math.atan2(y, x)
    if _is_class3(res):
        theta = _pos_angle(theta + _AP7_ROT_RADS)
    theta = _pos_angle(FACE_AXES_AZ_RADS_CII[face][0] - theta)

    face_lat, face_lng = FACE_CENTER_GEO[face]
    lat, lng = _coord_at(face_lat, face_lng, theta, r)
    return math.degrees(lat), math.degrees(lng)


# --- misc index ops ----------------------------------------------------------


def cell_to_parent(cell: int, parent_res: int) -> int:
    """Ancestor of a cell at a coarser resolution."""
    res = get_resolution(cell)
    if parent_res > res:
        raise ValueError(f"parent resolution {parent_res} finer than cell ({res})")
    bits = _set_resolution(cell, parent_res)
    return bits | ((1 << _digit_offset(parent_res)) - 1)


def is_valid_cell(cell: int) -> bool:
    """True if the 64-bit value is a well-formed cell index."""
    if cell < 0 or cell > 0xFFFFFFFFFFFFFFFF:
        return False
    if (cell >> 56) & 0b1000_0111:  # high bit and reserved bits must be 0
        return False
    if (cell >> 59) & 0xF != 1:  # mode must be "cell"
        return False

    base = get_base_cell(cell)
    if base > 121:
        return False

    res = get_resolution(cell)
    unused_mask = (1 << _digit_offset(res)) - 1
    if (~cell) & unused_mask:
        return False

    for r in range(1, res + 1):
        if _get_digit(cell, r) == 7:
            return False

    if base in PENTAGON_BASE_CELLS and res > 0 and _first_axe(cell) == 1:
        return False

    return True


def great_circle_km(
    lat1_deg: float, lon1_deg: float, lat2_deg: float, lon2_deg: float
) -> float:
    """Haversine distance on the H3 authalic sphere."""
    lat1, lon1 = math.radians(lat1_deg), math.radians(lon1_deg)
    lat2, lon2 = math.radians(lat2_deg), math.radians(lon2_deg)
    sin_lat = math.sin((lat2 - lat1) / 2.0)
    sin_lon = math.sin((lon2 - lon1) / 2.0)
    a = sin_lat * sin_lat + math.cos(lat1) * math.cos(lat2) * sin_lon * sin_lon
    return 2.0 * math.atan2(math.sqrt(a), math.sqrt(1.0 - a)) * EARTH_RADIUS_KM
