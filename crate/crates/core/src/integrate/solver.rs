//! Explicit Runge–Kutta steppers over a fixed-size state.

pub const STATE_DIM: usize = 6;
pub type State = [f64; STATE_DIM];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..STATE_DIM {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step<E>(f: &mut impl FnMut(f64, &State) -> Result<State, E>, t: f64, y: &State, h: f64) -> Result<State, E> {
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(y, h, &[(0.5, &k1)]))?;
    let k3 = f(t + 0.5 * h, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = f(t + h, &axpy(y, h, &[(1.0, &k3)]))?;
    Ok(axpy(y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]))
}

/// One Fehlberg 4(5) step: the fifth-order solution and the difference to the
/// embedded fourth-order one.
pub fn rkf45_step<E>(
    f: &mut impl FnMut(f64, &State) -> Result<State, E>,
    t: f64,
    y: &State,
    h: f64,
) -> Result<(State, State), E> {
    let k1 = f(t, y)?;
    let k2 = f(t + h / 4.0, &axpy(y, h, &[(1.0 / 4.0, &k1)]))?;
    let k3 = f(t + 3.0 * h / 8.0, &axpy(y, h, &[(3.0 / 32.0, &k1), (9.0 / 32.0, &k2)]))?;
    let k4 = f(
        t + 12.0 * h / 13.0,
        &axpy(y, h, &[(1932.0 / 2197.0, &k1), (-7200.0 / 2197.0, &k2), (7296.0 / 2197.0, &k3)]),
    )?;
    let k5 =
        f(t + h, &axpy(y, h, &[(439.0 / 216.0, &k1), (-8.0, &k2), (3680.0 / 513.0, &k3), (-845.0 / 4104.0, &k4)]))?;
    let k6 = f(
        t + h / 2.0,
        &axpy(
            y,
            h,
            &[(-8.0 / 27.0, &k1), (2.0, &k2), (-3544.0 / 2565.0, &k3), (1859.0 / 4104.0, &k4), (-11.0 / 40.0, &k5)],
        ),
    )?;
    let fifth = axpy(
        y,
        h,
        &[
            (16.0 / 135.0, &k1),
            (6656.0 / 12825.0, &k3),
            (28561.0 / 56430.0, &k4),
            (-9.0 / 50.0, &k5),
            (2.0 / 55.0, &k6),
        ],
    );
    let fourth = axpy(y, h, &[(25.0 / 216.0, &k1), (1408.0 / 2565.0, &k3), (2197.0 / 4104.0, &k4), (-1.0 / 5.0, &k5)]);
    let mut err = [0.0; STATE_DIM];
    for i in 0..STATE_DIM {
        err[i] = fifth[i] - fourth[i];
    }
    Ok((fifth, err))
}
