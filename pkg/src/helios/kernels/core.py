"""Numeric kernels shared by the environment, aircraft and planner layers.

Everything here is scalar-loop code written to compile under numba's
nopython mode (see _dispatch).  The planners call `segment_kernel` tens of
thousands of times, so the whole integration step — weather interpolation,
solar geometry, power balance, cost accumulation — lives in one fused loop.

Array packing conventions (built by environment.grid / aircraft.params):

 * weather 3D fields  f3[4, nt, nalt, nlat, nlon]: temp, humidity, wind E, wind N
 * weather 2D fields  f2[5, nt, nlat, nlon]: gust, precip rate [mm/h], CAPE,
   total irradiance [W/m2], direct irradiance [W/m2] (rates pre-converted)
 * aircraft params    ap[N_AP] (indices AP_*)
 * cost params        c_time + alpha/beta/eps/enabled[10] (indices TERM_*)
 * run config         cfg[N_CF] (indices CF_*)
"""
import math

import numpy as np

from ._dispatch import jit

# --- packed-array index constants ------------------------------------------

# weather sample vector
S_TEMP, S_HUM, S_WE, S_WN, S_GUST, S_PRECIP, S_CAPE, S_IRRT, S_IRRD = range(9)
N_SAMPLE = 9

# cost terms; 0 is the (un-normalized) time term
(
    TERM_TIME,
    TERM_SOC,
    TERM_RADIATION,
    TERM_EXCESS,
    TERM_CAPE,
    TERM_WIND,
    TERM_GUST,
    TERM_PRECIP,
    TERM_HUMIDITY,
    TERM_AGL,
) = range(10)
N_TERMS = 10

# aircraft parameter vector
(
    AP_M_TOT,
    AP_E_BAT_J,
    AP_ETA_SM,
    AP_ETA_MPPT,
    AP_ETA_CHARGE,
    AP_ETA_CLIMB,
    AP_A_SOLAR,
    AP_C0,
    AP_C1,
    AP_C2,
    AP_RHO0,
    AP_P_AVPLD,
    AP_V_MIN,
    AP_V_OPT,
    AP_V_MAX,
    AP_SOC_KNEE,
    AP_H_MIN,
    AP_H_MAX,
    AP_TILT,
    AP_T_DERATE,
    AP_T_IRR,
    AP_T_REF,
) = range(22)
N_AP = 22

# run configuration vector
(
    CF_DT,
    CF_VGND_FLOOR,
    CF_MAX_CLIMB_TAN,
    CF_ALLOW_SPEEDUP,
    CF_SOC_FULL_EPS,
    CF_CS_TAU,
    CF_HOLD,
    CF_WIND_MODE,  # 0: grid wind; 1: forced pure tailwind (heuristic bound)
    CF_WIND_TAIL,  # tailwind magnitude for mode 1
    CF_RAD_MODE,  # 0: grid radiation; 1: clear-sky income (heuristic bound)
    CF_FIXED_VAIR,  # >0: fly this airspeed instead of the policy baseline
) = range(11)
N_CF = 11

# segment status codes
ST_OK = 0
ST_CANCELLED = 1
ST_WIND_INFEASIBLE = 2
ST_DOMAIN_TIME = 3
ST_DOMAIN_LAT = 4
ST_DOMAIN_LON = 5
ST_DOMAIN_ALT = 6
ST_CLIMB_INFEASIBLE = 7
ST_MAX_STEPS = 8

# trace columns
TR_TIME = 0
TR_LAT = 1
TR_LON = 2
TR_ALT = 3
TR_SOC = 4
TR_VAIR = 5
TR_VGND = 6
TR_HEADING = 7
TR_PSOLAR = 8
TR_PFLIGHT = 9
TR_SAMPLE0 = 10  # 9 sample slots
TR_RADFACTOR = 19  # derived cost inputs
TR_EXCESS = 20
TR_AGL = 21
TR_RATE0 = 22  # 10 cost-rate slots
N_TRACE_COLS = 32

EARTH_R = 6371000.0
SOLAR_CONSTANT = 1361.0
ISA_RHO0 = 1.225
ISA_T0 = 288.15
ISA_LAPSE = 0.0065
ISA_G = 9.80665
ISA_R = 287.053
GRAVITY = 9.80665

_D2R = math.pi / 180.0
_R2D = 180.0 / math.pi


# --- basic geometry ----------------------------------------------------------


@jit
def gc_distance(lat1, lon1, lat2, lon2):
    p1 = lat1 * _D2R
    p2 = lat2 * _D2R
    dp = (lat2 - lat1) * _D2R
    dl = (lon2 - lon1) * _D2R
    a = math.sin(dp * 0.5) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl * 0.5) ** 2
    if a > 1.0:
        a = 1.0
    return 2.0 * EARTH_R * math.asin(math.sqrt(a))


@jit
def gc_bearing(lat1, lon1, lat2, lon2):
    p1 = lat1 * _D2R
    p2 = lat2 * _D2R
    dl = (lon2 - lon1) * _D2R
    y = math.sin(dl) * math.cos(p2)
    x = math.cos(p1) * math.sin(p2) - math.sin(p1) * math.cos(p2) * math.cos(dl)
    b = math.atan2(y, x) * _R2D
    return b % 360.0


@jit
def gc_destination(lat, lon, bearing_deg, dist_m):
    d = dist_m / EARTH_R
    b = bearing_deg * _D2R
    p1 = lat * _D2R
    l1 = lon * _D2R
    sp2 = math.sin(p1) * math.cos(d) + math.cos(p1) * math.sin(d) * math.cos(b)
    if sp2 > 1.0:
        sp2 = 1.0
    elif sp2 < -1.0:
        sp2 = -1.0
    p2 = math.asin(sp2)
    l2 = l1 + math.atan2(
        math.sin(b) * math.sin(d) * math.cos(p1), math.cos(d) - math.sin(p1) * sp2
    )
    lon2 = l2 * _R2D
    lon2 = (lon2 + 180.0) % 360.0 - 180.0
    return p2 * _R2D, lon2


# --- solar geometry ----------------------------------------------------------


@jit
def sun_position(lat_deg, lon_deg, t_unix):
    """Sun elevation and azimuth (deg, compass) from the low-precision
    almanac series; good to ~0.1 deg over 1950-2050."""
    d = t_unix / 86400.0 - 10957.5  # days since J2000.0
    g = (357.529 + 0.98560028 * d) % 360.0 * _D2R
    q = (280.459 + 0.98564736 * d) % 360.0
    lam = (q + 1.915 * math.sin(g) + 0.020 * math.sin(2.0 * g)) * _D2R
    eps = (23.439 - 0.00000036 * d) * _D2R
    sin_dec = math.sin(eps) * math.sin(lam)
    dec = math.asin(sin_dec)
    ra = math.atan2(math.cos(eps) * math.sin(lam), math.cos(lam))
    gmst_h = (18.697374558 + 24.06570982441908 * d) % 24.0
    lst_deg = gmst_h * 15.0 + lon_deg
    ha = (lst_deg - ra * _R2D) % 360.0
    if ha > 180.0:
        ha -= 360.0
    ha_r = ha * _D2R
    phi = lat_deg * _D2R
    sin_e = math.sin(phi) * sin_dec + math.cos(phi) * math.cos(dec) * math.cos(ha_r)
    if sin_e > 1.0:
        sin_e = 1.0
    elif sin_e < -1.0:
        sin_e = -1.0
    elev = math.asin(sin_e) * _R2D
    # azimuth measured clockwise from north
    az = math.atan2(
        math.sin(ha_r),
        math.cos(ha_r) * math.sin(phi) - math.tan(dec) * math.cos(phi),
    )
    az_deg = (az * _R2D + 180.0) % 360.0
    return elev, az_deg


@jit
def clear_sky_irradiance(elev_deg, tau):
    """Clear-sky global irradiance [W/m2] for a given sun elevation.

    Beam transmittance tau raised to airmass^0.678 (Meinel exponent) keeps
    the low-sun shoulder realistic while the overhead value stays I0*tau.
    """
    if elev_deg <= 0.0:
        return 0.0
    sin_e = math.sin(elev_deg * _D2R)
    if sin_e < 0.05:
        sin_e_m = 0.05
    else:
        sin_e_m = sin_e
    airmass = 1.0 / sin_e_m
    return SOLAR_CONSTANT * (tau ** (airmass ** 0.678)) * sin_e


@jit
def air_density(alt_m):
    """ISA troposphere density; valid 0..11 km."""
    t = ISA_T0 - ISA_LAPSE * alt_m
    return ISA_RHO0 * (t / ISA_T0) ** (ISA_G / (ISA_R * ISA_LAPSE) - 1.0)


# --- gridded-field interpolation ---------------------------------------------


@jit
def _bracket(axis, x):
    """Index i and weight w with axis[i] <= x <= axis[i+1].

    Returns (-1, 0.0) when x is outside the axis (with a small relative
    tolerance at the borders).  Degenerate single-point axes accept any x.
    """
    n = axis.shape[0]
    if n == 1:
        return 0, 0.0
    lo = axis[0]
    hi = axis[n - 1]
    tol = 1e-6 * max(1.0, abs(hi - lo))
    if x < lo - tol or x > hi + tol:
        return -1, 0.0
    if x <= lo:
        return 0, 0.0
    if x >= hi:
        return n - 2, 1.0
    i0 = 0
    i1 = n - 1
    while i1 - i0 > 1:
        mid = (i0 + i1) // 2
        if axis[mid] <= x:
            i0 = mid
        else:
            i1 = mid
    w = (x - axis[i0]) / (axis[i0 + 1] - axis[i0])
    return i0, w


@jit
def interp_field3(field, it, wt, ia, wa, iy, wy, ix, wx):
    """Quadrilinear interpolation of one [t, alt, lat, lon] field."""
    v = 0.0
    for dt_ in range(2):
        ft = (1.0 - wt) if dt_ == 0 else wt
        if ft == 0.0:
            continue
        t_idx = it + dt_ if field.shape[0] > 1 else 0
        for da in range(2):
            fa = (1.0 - wa) if da == 0 else wa
            if fa == 0.0:
                continue
            a_idx = ia + da if field.shape[1] > 1 else 0
            for dy in range(2):
                fy = (1.0 - wy) if dy == 0 else wy
                if fy == 0.0:
                    continue
                y_idx = iy + dy if field.shape[2] > 1 else 0
                for dx in range(2):
                    fx = (1.0 - wx) if dx == 0 else wx
                    if fx == 0.0:
                        continue
                    x_idx = ix + dx if field.shape[3] > 1 else 0
                    v += ft * fa * fy * fx * field[t_idx, a_idx, y_idx, x_idx]
    return v


@jit
def interp_field2(field, it, wt, iy, wy, ix, wx):
    """Trilinear interpolation of one [t, lat, lon] field."""
    v = 0.0
    for dt_ in range(2):
        ft = (1.0 - wt) if dt_ == 0 else wt
        if ft == 0.0:
            continue
        t_idx = it + dt_ if field.shape[0] > 1 else 0
        for dy in range(2):
            fy = (1.0 - wy) if dy == 0 else wy
            if fy == 0.0:
                continue
            y_idx = iy + dy if field.shape[1] > 1 else 0
            for dx in range(2):
                fx = (1.0 - wx) if dx == 0 else wx
                if fx == 0.0:
                    continue
                x_idx = ix + dx if field.shape[2] > 1 else 0
                v += ft * fy * fx * field[t_idx, y_idx, x_idx]
    return v


@jit
def sample_weather(wt, wa, wla, wlo, f3, f2, lat, lon, alt, t, out):
    """Fill `out` (N_SAMPLE) with interpolated weather at a point in space/time.

    Returns an ST_* status.  Interval-accumulated fields (precip, radiation)
    are stored as rates attributed to the interval ending at each timestamp,
    so their time lookup is piecewise-constant; instantaneous fields are
    linear in time.
    """
    it, wt_f = _bracket(wt, t)
    if it < 0:
        return ST_DOMAIN_TIME
    iy, wy = _bracket(wla, lat)
    if iy < 0:
        return ST_DOMAIN_LAT
    ix, wx = _bracket(wlo, lon)
    if ix < 0:
        return ST_DOMAIN_LON
    ia, wa_f = _bracket(wa, alt)
    if ia < 0:
        return ST_DOMAIN_ALT

    out[S_TEMP] = interp_field3(f3[0], it, wt_f, ia, wa_f, iy, wy, ix, wx)
    out[S_HUM] = interp_field3(f3[1], it, wt_f, ia, wa_f, iy, wy, ix, wx)
    out[S_WE] = interp_field3(f3[2], it, wt_f, ia, wa_f, iy, wy, ix, wx)
    out[S_WN] = interp_field3(f3[3], it, wt_f, ia, wa_f, iy, wy, ix, wx)

    # step-accumulated rates: take the value of the interval ending at the
    # next timestamp (exactly on a node -> that node), conserving integrals
    if wt_f > 0.0 and f2.shape[1] > 1:
        it_rate = it + 1
    else:
        it_rate = it
    out[S_GUST] = interp_field2(f2[0], it, wt_f, iy, wy, ix, wx)
    out[S_PRECIP] = interp_field2(f2[1], it_rate, 0.0, iy, wy, ix, wx)
    out[S_CAPE] = interp_field2(f2[2], it, wt_f, iy, wy, ix, wx)
    out[S_IRRT] = interp_field2(f2[3], it_rate, 0.0, iy, wy, ix, wx)
    out[S_IRRD] = interp_field2(f2[4], it_rate, 0.0, iy, wy, ix, wx)
    return ST_OK


@jit
def interp_dem(dlat, dlon, delev, lat, lon):
    """Bilinear terrain elevation; returns (status, elevation)."""
    iy, wy = _bracket(dlat, lat)
    if iy < 0:
        return ST_DOMAIN_LAT, 0.0
    ix, wx = _bracket(dlon, lon)
    if ix < 0:
        return ST_DOMAIN_LON, 0.0
    iy1 = iy + 1 if delev.shape[0] > 1 else iy
    ix1 = ix + 1 if delev.shape[1] > 1 else ix
    v = (
        (1.0 - wy) * (1.0 - wx) * delev[iy, ix]
        + (1.0 - wy) * wx * delev[iy, ix1]
        + wy * (1.0 - wx) * delev[iy1, ix]
        + wy * wx * delev[iy1, ix1]
    )
    return ST_OK, v


# --- aircraft model ----------------------------------------------------------


@jit
def wind_triangle(v_air, wind_e, wind_n, course_deg):
    """Heading and ground speed to hold `course_deg` at `v_air` in wind.

    Returns (ok, v_gnd, heading_deg); ok=0 when the crosswind exceeds v_air
    or the along-course speed would be <= 0.
    """
    c = course_deg * _D2R
    ce = math.sin(c)
    cn = math.cos(c)
    # wind components along/across the course (cross: positive to the right)
    along = wind_e * ce + wind_n * cn
    cross = wind_e * cn - wind_n * ce
    if v_air <= 0.0:
        return 0, 0.0, course_deg
    ratio = -cross / v_air
    if ratio > 1.0 or ratio < -1.0:
        return 0, 0.0, course_deg
    # air vector must cancel the crosswind component
    delta = math.asin(ratio)
    v_gnd = v_air * math.cos(delta) + along
    if v_gnd <= 0.0:
        return 0, 0.0, course_deg
    heading = (course_deg + delta * _R2D) % 360.0
    return 1, v_gnd, heading


@jit
def level_power(ap, rho, v_air):
    """Level-flight electric power [W] at density rho and airspeed v_air."""
    r = rho / ap[AP_RHO0]
    s = 1.0 / math.sqrt(r)
    prop = s * (
        ap[AP_C2] * v_air * v_air * r + ap[AP_C1] * v_air * math.sqrt(r) + ap[AP_C0]
    )
    return prop + ap[AP_P_AVPLD]


@jit
def flight_power(ap, rho, v_air, climb_rate):
    """Total flight power; climbing adds potential-energy flux, descent is free."""
    p = level_power(ap, rho, v_air)
    if climb_rate > 0.0:
        p += ap[AP_M_TOT] * GRAVITY * climb_rate / ap[AP_ETA_CLIMB]
    return p


@jit
def invert_level_power(ap, rho, p_target):
    """Airspeed at which level power equals p_target (clamped to the envelope)."""
    r = rho / ap[AP_RHO0]
    s = 1.0 / math.sqrt(r)
    a = ap[AP_C2] * math.sqrt(r)  # s * C2 * r
    b = ap[AP_C1]  # s * C1 * sqrt(r)
    c = ap[AP_C0] * s + ap[AP_P_AVPLD] - p_target
    if a <= 0.0:
        return ap[AP_V_OPT]
    disc = b * b - 4.0 * a * c
    if disc <= 0.0:
        return ap[AP_V_OPT]
    v = (-b + math.sqrt(disc)) / (2.0 * a)
    if v < ap[AP_V_OPT]:
        v = ap[AP_V_OPT]
    if v > ap[AP_V_MAX]:
        v = ap[AP_V_MAX]
    return v


@jit
def solar_power(ap, irr_total, irr_direct, sun_elev_deg, temp_amb):
    """Electric power from the solar array for given irradiances [W/m2]."""
    if irr_total <= 0.0:
        return 0.0
    i_diff = irr_total - irr_direct
    if i_diff < 0.0:
        i_diff = 0.0
    cos_inc = 0.0
    if sun_elev_deg > 0.0:
        zen = 90.0 - sun_elev_deg
        inc = zen - ap[AP_TILT]
        if inc < 0.0:
            inc = -inc
        cos_inc = math.cos(inc * _D2R)
        if cos_inc < 0.0:
            cos_inc = 0.0
    t_module = temp_amb + ap[AP_T_IRR] * (irr_total / 1000.0)
    eta = ap[AP_ETA_SM] * (1.0 - ap[AP_T_DERATE] * (t_module - ap[AP_T_REF]))
    if eta < 0.0:
        eta = 0.0
    return (i_diff + irr_direct * cos_inc) * ap[AP_A_SOLAR] * eta * ap[AP_ETA_MPPT]


@jit
def soc_step(ap, soc, p_solar, p_flight, dt):
    """Battery state-of-charge update over dt seconds (clamped to [0, 1])."""
    net = p_solar - p_flight
    if net > 0.0:
        rate = net * ap[AP_ETA_CHARGE] / ap[AP_E_BAT_J]
        knee = ap[AP_SOC_KNEE]
        if soc > knee and knee < 1.0:
            taper = (1.0 - soc) / (1.0 - knee)
            if taper < 0.0:
                taper = 0.0
            rate *= taper
    else:
        rate = net / ap[AP_E_BAT_J]
    soc2 = soc + rate * dt
    if soc2 > 1.0:
        soc2 = 1.0
    elif soc2 < 0.0:
        soc2 = 0.0
    return soc2


@jit
def policy_airspeed(ap, cfg, soc, p_solar, rho, along_wind, cross_wind, climb_pending):
    """Commanded airspeed from the on-board flight-planner rules.

    Baseline is the power-optimal speed; headwind raises it to keep the
    ground-speed floor; full batteries plus excess solar convert the surplus
    into speed (when allowed and no climb is pending).
    """
    if cfg[CF_FIXED_VAIR] > 0.0:
        v_cmd = cfg[CF_FIXED_VAIR]
    else:
        v_cmd = ap[AP_V_OPT]
    if (
        cfg[CF_ALLOW_SPEEDUP] > 0.0
        and climb_pending == 0
        and soc >= 1.0 - cfg[CF_SOC_FULL_EPS]
    ):
        p_lvl = level_power(ap, rho, v_cmd)
        if p_solar > p_lvl:
            v_cmd = invert_level_power(ap, rho, p_solar)
    # ground-speed floor against headwind
    floor = cfg[CF_VGND_FLOOR]
    need = floor - along_wind  # required along-course airspeed component
    if need > 0.0:
        v_req = math.sqrt(need * need + cross_wind * cross_wind)
        if v_req > v_cmd:
            v_cmd = v_req
    else:
        # still need to defeat the crosswind for a solvable wind triangle
        if cross_wind < 0.0:
            cw = -cross_wind
        else:
            cw = cross_wind
        if cw > v_cmd:
            v_cmd = cw * 1.0000001
    if v_cmd > ap[AP_V_MAX]:
        v_cmd = ap[AP_V_MAX]
    if v_cmd < ap[AP_V_MIN]:
        v_cmd = ap[AP_V_MIN]
    return v_cmd


@jit
def normalized_cost(x, alpha, beta, eps):
    """Threshold/limit/curvature cost normalization.

    Returns a value in [0, 1); 2.0 is the CANCEL sentinel (input at or past
    the limit beta on the dangerous side).
    """
    u = (x - alpha) / (beta - alpha)
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 2.0
    return (math.exp(u * eps) - 1.0) / (math.exp(eps) - 1.0)


# --- fused segment integrator -------------------------------------------------


@jit
def interval_clear_sky(lat, lon, t_hi, step, tau):
    """Clear-sky irradiance averaged over an accumulation interval.

    The forecast radiation fields are per-step averages; the cloud-cover
    factor must divide by the same kind of quantity or clear mornings read
    as cloudy.
    """
    t_lo = t_hi - step
    acc = 0.0
    for kq in range(9):
        tq = t_lo + step * kq / 8.0
        eq, _azq = sun_position(lat, lon, tq)
        icq = clear_sky_irradiance(eq, tau)
        if kq == 0 or kq == 8:
            acc += 0.5 * icq
        else:
            acc += icq
    return acc / 8.0


@jit
def segment_kernel(
    wt,
    wa,
    wla,
    wlo,
    wstep,
    f3,
    f2,
    dlat,
    dlon,
    delev,
    has_dem,
    ap,
    c_time,
    alphas,
    betas,
    epss,
    enabled,
    cfg,
    lat0,
    lon0,
    alt0,
    t0,
    soc0,
    lat1,
    lon1,
    alt1,
    trace,
):
    """Simulate one path segment (or a loiter hold) with forward Euler.

    Returns (n_samples, status, cancel_term, end_time, end_soc, end_v_air,
    integrals[10], max_inputs[10]).  `trace` must be a preallocated
    [max_steps, N_TRACE_COLS] array; one row is written per step start.
    """
    integrals = np.zeros(N_TERMS)
    max_inputs = np.full(N_TERMS, -1.0e300)
    sample = np.zeros(N_SAMPLE)

    dt_nom = cfg[CF_DT]
    hold = cfg[CF_HOLD]
    loiter = hold > 0.0

    lat = lat0
    lon = lon0
    alt = alt0
    t = t0
    soc = soc0
    v_air = ap[AP_V_OPT]
    status = ST_OK
    cancel_term = -1

    total_dist = gc_distance(lat0, lon0, lat1, lon1)
    if not loiter:
        climb_total = alt1 - alt0
        if climb_total < 0.0:
            climb_abs = -climb_total
        else:
            climb_abs = climb_total
        if climb_abs > 1e-6:
            if total_dist * cfg[CF_MAX_CLIMB_TAN] < climb_abs - 1e-9:
                return 0, ST_CLIMB_INFEASIBLE, -1, t, soc, v_air, integrals, max_inputs

    t_end = t0 + hold
    max_steps = trace.shape[0]
    n = 0
    arrive_tol = 1.0  # metres

    while True:
        if loiter:
            if t >= t_end - 1e-9:
                break
        else:
            remaining = gc_distance(lat, lon, lat1, lon1)
            if remaining <= arrive_tol:
                break
        if n >= max_steps:
            status = ST_MAX_STEPS
            break

        st = sample_weather(wt, wa, wla, wlo, f3, f2, lat, lon, alt, t, sample)
        if st != ST_OK:
            status = st
            break

        terrain = 0.0
        if has_dem == 1:
            st_d, terrain = interp_dem(dlat, dlon, delev, lat, lon)
            if st_d != ST_OK:
                terrain = 0.0
        agl = alt - terrain

        elev, _az = sun_position(lat, lon, t)
        ics = clear_sky_irradiance(elev, cfg[CF_CS_TAU])
        if cfg[CF_RAD_MODE] == 1.0:
            # best-case income: cloudless sky regardless of the grid
            sample[S_IRRT] = ics
            sample[S_IRRD] = 0.85 * ics
            rad_factor = 1.0
        else:
            # denominator averaged over the same interval as the stored rate
            it_q, wt_q = _bracket(wt, t)
            if wt.shape[0] > 1:
                if wt_q > 0.0:
                    it_q += 1
                t_hi = wt[it_q]
            else:
                t_hi = t
            ics_avg = interval_clear_sky(lat, lon, t_hi, wstep[it_q], cfg[CF_CS_TAU])
            if ics_avg < 5.0:
                rad_factor = 1.0
            else:
                rad_factor = sample[S_IRRT] / ics_avg
                if rad_factor > 1.0:
                    rad_factor = 1.0
                elif rad_factor < 0.0:
                    rad_factor = 0.0

        rho = air_density(alt)
        p_solar = solar_power(ap, sample[S_IRRT], sample[S_IRRD], elev, sample[S_TEMP])

        if loiter:
            course = 0.0
            wind_spd = math.sqrt(sample[S_WE] ** 2 + sample[S_WN] ** 2)
            # hold against the wind: treat full wind as headwind for the floor
            v_air = policy_airspeed(ap, cfg, soc, p_solar, rho, -wind_spd, 0.0, 0)
            v_gnd = 0.0
            heading = (math.atan2(-sample[S_WE], -sample[S_WN]) * _R2D) % 360.0
            climb_rate = 0.0
            dt_step = dt_nom
            if t + dt_step > t_end:
                dt_step = t_end - t
        else:
            course = gc_bearing(lat, lon, lat1, lon1)
            dh = alt1 - alt
            climb_pending = 1 if (dh > 1e-6 or dh < -1e-6) else 0
            if cfg[CF_WIND_MODE] == 1.0:
                # forced pure tailwind along the course
                along = cfg[CF_WIND_TAIL]
                v_air = policy_airspeed(
                    ap, cfg, soc, p_solar, rho, along, 0.0, climb_pending
                )
                v_gnd = v_air + along
                heading = course
                if v_gnd <= 0.0:
                    status = ST_WIND_INFEASIBLE
                    break
            else:
                ce = math.sin(course * _D2R)
                cn = math.cos(course * _D2R)
                along = sample[S_WE] * ce + sample[S_WN] * cn
                cross = sample[S_WE] * cn - sample[S_WN] * ce
                v_air = policy_airspeed(
                    ap, cfg, soc, p_solar, rho, along, cross, climb_pending
                )
                ok, v_gnd, heading = wind_triangle(
                    v_air, sample[S_WE], sample[S_WN], course
                )
                if ok == 0:
                    # one retry at the envelope limit before declaring infeasibility
                    v_air = ap[AP_V_MAX]
                    ok, v_gnd, heading = wind_triangle(
                        v_air, sample[S_WE], sample[S_WN], course
                    )
                    if ok == 0:
                        status = ST_WIND_INFEASIBLE
                        break
            dt_step = dt_nom
            step_dist = v_gnd * dt_step
            if step_dist >= remaining:
                dt_step = remaining / v_gnd
                step_dist = remaining
            # altitude transition: climb/descend at the capped angle
            max_rate = cfg[CF_MAX_CLIMB_TAN] * v_gnd
            if dh > 1e-6:
                climb_rate = dh / dt_step
                if climb_rate > max_rate:
                    climb_rate = max_rate
            elif dh < -1e-6:
                climb_rate = dh / dt_step
                if climb_rate < -max_rate:
                    climb_rate = -max_rate
            else:
                climb_rate = 0.0

        p_flight = flight_power(ap, rho, v_air, climb_rate)
        p_level_opt = level_power(ap, rho, ap[AP_V_OPT])
        excess = p_flight - p_level_opt
        wind_spd = math.sqrt(sample[S_WE] ** 2 + sample[S_WN] ** 2)

        # cost-term inputs, indexed by TERM_*
        row = trace[n]
        row[TR_TIME] = t
        row[TR_LAT] = lat
        row[TR_LON] = lon
        row[TR_ALT] = alt
        row[TR_SOC] = soc
        row[TR_VAIR] = v_air
        row[TR_VGND] = v_gnd
        row[TR_HEADING] = heading
        row[TR_PSOLAR] = p_solar
        row[TR_PFLIGHT] = p_flight
        for k in range(N_SAMPLE):
            row[TR_SAMPLE0 + k] = sample[k]
        row[TR_RADFACTOR] = rad_factor
        row[TR_EXCESS] = excess
        row[TR_AGL] = agl

        row[TR_RATE0 + TERM_TIME] = c_time
        integrals[TERM_TIME] += c_time * dt_step
        if max_inputs[TERM_TIME] < t - t0:
            max_inputs[TERM_TIME] = t - t0

        cancelled = False
        for k in range(1, N_TERMS):
            if k == TERM_SOC:
                x = soc
            elif k == TERM_RADIATION:
                x = rad_factor
            elif k == TERM_EXCESS:
                x = excess
            elif k == TERM_CAPE:
                x = sample[S_CAPE]
            elif k == TERM_WIND:
                x = wind_spd
            elif k == TERM_GUST:
                x = sample[S_GUST]
            elif k == TERM_PRECIP:
                x = sample[S_PRECIP]
            elif k == TERM_HUMIDITY:
                x = sample[S_HUM]
            else:
                x = agl
            if max_inputs[k] < x:
                max_inputs[k] = x
            if enabled[k] == 0.0:
                row[TR_RATE0 + k] = 0.0
                continue
            rate = normalized_cost(x, alphas[k], betas[k], epss[k])
            if rate >= 2.0:
                row[TR_RATE0 + k] = rate
                cancel_term = k
                cancelled = True
                break
            row[TR_RATE0 + k] = rate
            integrals[k] += rate * dt_step

        n += 1
        if cancelled:
            status = ST_CANCELLED
            break

        soc = soc_step(ap, soc, p_solar, p_flight, dt_step)
        t += dt_step
        if not loiter:
            lat, lon = gc_destination(lat, lon, course, v_gnd * dt_step)
            alt += climb_rate * dt_step
            # snap onto the target level once the transition completes
            if climb_rate > 0.0 and alt > alt1:
                alt = alt1
            elif climb_rate < 0.0 and alt < alt1:
                alt = alt1

    if status == ST_OK and not loiter:
        # land exactly on the target
        lat = lat1
        lon = lon1
        alt = alt1
    return n, status, cancel_term, t, soc, v_air, integrals, max_inputs
