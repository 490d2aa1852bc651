use crate::linalg::{self, c};
use crate::opcore::ProjectionMatrix;
use crate::sections::average::round_half;
use crate::{Error, Result};

/// `[P0, P1]_t = 1_[1/2,inf)((1 - t) P0 + t P1)`, defined while `||P0 - P1|| < 1`.
pub fn homotopy_projections(
    p0: &ProjectionMatrix,
    p1: &ProjectionMatrix,
    t: f64,
) -> Result<ProjectionMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("homotopy time must lie in [0, 1], got {t}")));
    }
    if p0.tail_type() != p1.tail_type() {
        return Err(Error::TailMismatch(format!(
            "projections with tails {:?} and {:?}",
            p0.tail_type(),
            p1.tail_type()
        )));
    }
    let distance = p0.distance(p1)?;
    if distance >= 1.0 - 1e-9 {
        return Err(Error::ProjectionsTooFar { distance });
    }
    if t == 0.0 {
        return Ok(p0.clone());
    }
    if t == 1.0 {
        return Ok(p1.clone());
    }
    let mix = p0.entries() * c(1.0 - t) + p1.entries() * c(t);
    let (q, _) = round_half(&linalg::hermitian_part(&mix));
    ProjectionMatrix::with_tolerance(q, p0.tail_type(), p0.tolerance())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real;
    use crate::opcore::TailType;

    fn line(angle: f64) -> ProjectionMatrix {
        let (s, co) = angle.sin_cos();
        let m = from_real(2, 2, &[co * co, co * s, co * s, s * s]);
        ProjectionMatrix::new(m, TailType::Zero).unwrap()
    }

    #[test]
    fn endpoints_and_constant_path() {
        let p0 = line(0.0);
        let p1 = line(0.4);
        assert_eq!(homotopy_projections(&p0, &p1, 0.0).unwrap(), p0);
        assert_eq!(homotopy_projections(&p0, &p1, 1.0).unwrap(), p1);
        let mid = homotopy_projections(&p0, &p0, 0.3).unwrap();
        assert!(linalg::max_abs(&(mid.entries() - p0.entries())) < 1e-14);
    }

    #[test]
    fn midpoint_bisects_the_angle() {
        let deg = std::f64::consts::PI / 180.0;
        let mid = homotopy_projections(&line(0.0), &line(30.0 * deg), 0.5).unwrap();
        assert!(linalg::max_abs(&(mid.entries() - line(15.0 * deg).entries())) < 1e-12);
    }

    #[test]
    fn orthogonal_projections_are_too_far() {
        let err = homotopy_projections(&line(0.0), &line(std::f64::consts::FRAC_PI_2), 0.5)
            .unwrap_err();
        assert_eq!(err.reason(), "projections_too_far");
    }
}
