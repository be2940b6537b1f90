//! Bridge between toric plurisubharmonic geodesics and real convex geodesics.
//!
//! A toric function of `(w, z)` depends only on the moduli, and under the log
//! substitution `|w| = e^x`, `|z| = e^t` plurisubharmonicity corresponds to
//! convexity of the pullback and the complex Monge-Ampere operator vanishes
//! exactly when the real one does. The annulus `1 < |z| < e` maps to the time
//! interval `(0, 1)` with no rescaling, and the unbounded log image of the
//! disc is truncated on the left.

use num_complex::Complex64;
use serde::Deserialize;

use crate::domain::SpaceDomain;
use crate::error::{Error, Result};
use crate::expr::{Expr, ScalarField, Var};
use crate::grid::GridField;
use crate::verify::{convexity_check, discrete_hessian};

/// Default left truncation of the unbounded log image: values of the
/// reference data are within e^{-8} of their asymptote at x = -4.
pub const DEFAULT_TRUNCATION: f64 = -4.0;

/// Expression over the moduli `|w|` and `|z|` of a toric function.
#[derive(Debug, Clone, PartialEq)]
enum RadialExpr {
    Const(f64),
    ModW,
    ModZ,
    Add(Box<RadialExpr>, Box<RadialExpr>),
    Sub(Box<RadialExpr>, Box<RadialExpr>),
    Mul(Box<RadialExpr>, Box<RadialExpr>),
    Div(Box<RadialExpr>, Box<RadialExpr>),
    PowI(Box<RadialExpr>, i32),
    /// Real constant exponent, e.g. `|z|^log(2)`.
    PowC(Box<RadialExpr>, f64),
    Neg(Box<RadialExpr>),
    Exp(Box<RadialExpr>),
    Log(Box<RadialExpr>),
}

/// A field expressed through moduli only; the input side of the log pullback.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    ast: RadialExpr,
}

impl RadialField {
    /// Parse the radial grammar: the expression grammar with `|w|` and `|z|`
    /// as the variables and real constant exponents allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = RadialParser {
            src: text,
            bytes: text.as_bytes(),
            pos: 0,
        };
        let ast = p.expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(Error::Syntax {
                offset: p.pos,
                message: "trailing input".into(),
            });
        }
        Ok(RadialField { ast })
    }

    /// Evaluate directly at moduli `(|w|, |z|)`; the independent route the
    /// pullback is checked against.
    pub fn eval(&self, mod_w: f64, mod_z: f64) -> f64 {
        eval_radial(&self.ast, mod_w, mod_z)
    }
}

fn eval_radial(e: &RadialExpr, r: f64, s: f64) -> f64 {
    match e {
        RadialExpr::Const(c) => *c,
        RadialExpr::ModW => r,
        RadialExpr::ModZ => s,
        RadialExpr::Add(a, b) => eval_radial(a, r, s) + eval_radial(b, r, s),
        RadialExpr::Sub(a, b) => eval_radial(a, r, s) - eval_radial(b, r, s),
        RadialExpr::Mul(a, b) => eval_radial(a, r, s) * eval_radial(b, r, s),
        RadialExpr::Div(a, b) => eval_radial(a, r, s) / eval_radial(b, r, s),
        RadialExpr::PowI(a, n) => eval_radial(a, r, s).powi(*n),
        RadialExpr::PowC(a, c) => eval_radial(a, r, s).powf(*c),
        RadialExpr::Neg(a) => -eval_radial(a, r, s),
        RadialExpr::Exp(a) => eval_radial(a, r, s).exp(),
        RadialExpr::Log(a) => eval_radial(a, r, s).ln(),
    }
}

struct RadialParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> RadialParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<RadialExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = RadialExpr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = RadialExpr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RadialExpr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = RadialExpr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = RadialExpr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RadialExpr> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            return self.exponent(base);
        }
        Ok(base)
    }

    /// Exponents are integer literals or constant subexpressions such as
    /// `log(2)`; a constant integral value stays an integer power.
    fn exponent(&mut self, base: RadialExpr) -> Result<RadialExpr> {
        self.skip_ws();
        let start = self.pos;
        let e = self.base()?;
        if uses_moduli(&e) {
            return Err(Error::Syntax {
                offset: start,
                message: "exponent must be constant".into(),
            });
        }
        let c = eval_radial(&e, f64::NAN, f64::NAN);
        if !c.is_finite() {
            return Err(Error::Syntax {
                offset: start,
                message: "exponent does not evaluate to a finite constant".into(),
            });
        }
        if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 {
            Ok(RadialExpr::PowI(Box::new(base), c as i32))
        } else {
            Ok(RadialExpr::PowC(Box::new(base), c))
        }
    }

    fn base(&mut self) -> Result<RadialExpr> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(RadialExpr::Neg(Box::new(self.base()?)))
            }
            Some(b'|') => self.modulus(),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
        }
    }

    fn modulus(&mut self) -> Result<RadialExpr> {
        // at a '|'
        let rest = &self.src[self.pos..];
        if rest.starts_with("|w|") {
            self.pos += 3;
            Ok(RadialExpr::ModW)
        } else if rest.starts_with("|z|") {
            self.pos += 3;
            Ok(RadialExpr::ModZ)
        } else {
            Err(self.err("expected `|w|` or `|z|`"))
        }
    }

    fn number(&mut self) -> Result<RadialExpr> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit() || *b == b'.')
        {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(RadialExpr::Const)
            .map_err(|_| Error::Syntax {
                offset: start,
                message: "invalid number".into(),
            })
    }

    fn ident(&mut self) -> Result<RadialExpr> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphabetic())
        {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        match name {
            "exp" | "log" => {
                if self.peek() != Some(b'(') {
                    return Err(self.err(format!("expected `(` after `{}`", name)));
                }
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(if name == "exp" {
                    RadialExpr::Exp(Box::new(arg))
                } else {
                    RadialExpr::Log(Box::new(arg))
                })
            }
            // x or t in a radial field means the input is not toric
            "x" | "t" => Err(Error::NonToric(format!(
                "variable `{}` at offset {}; radial fields use |w| and |z|",
                name, start
            ))),
            _ => Err(Error::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            }),
        }
    }
}

fn uses_moduli(e: &RadialExpr) -> bool {
    match e {
        RadialExpr::Const(_) => false,
        RadialExpr::ModW | RadialExpr::ModZ => true,
        RadialExpr::Add(a, b)
        | RadialExpr::Sub(a, b)
        | RadialExpr::Mul(a, b)
        | RadialExpr::Div(a, b) => uses_moduli(a) || uses_moduli(b),
        RadialExpr::PowI(a, _)
        | RadialExpr::PowC(a, _)
        | RadialExpr::Neg(a)
        | RadialExpr::Exp(a)
        | RadialExpr::Log(a) => uses_moduli(a),
    }
}

/// Symbolic log restricted to factors that are positive by construction
/// (exponentials, powers of exponentials, positive constants and their
/// products); everything else is left under a `log` node unchanged.
fn symbolic_log(e: Expr) -> Expr {
    fn positive(e: &Expr) -> bool {
        match e {
            Expr::Const(c) => *c > 0.0,
            Expr::Exp(_) => true,
            Expr::Pow(b, _) => positive(b),
            Expr::Mul(a, b) | Expr::Div(a, b) => positive(a) && positive(b),
            _ => false,
        }
    }
    match e {
        Expr::Exp(u) => *u,
        Expr::Pow(b, n) if positive(&b) => {
            Expr::mul(Expr::Const(f64::from(n)), symbolic_log(*b))
        }
        Expr::Mul(a, b) if positive(&a) && positive(&b) => {
            Expr::add(symbolic_log(*a), symbolic_log(*b))
        }
        Expr::Div(a, b) if positive(&a) && positive(&b) => {
            Expr::sub(symbolic_log(*a), symbolic_log(*b))
        }
        e => Expr::log(e),
    }
}

/// Symbolic substitution `|w| -> e^x`, `|z| -> e^t`: the log pullback of a
/// toric field. Real powers of moduli become exponentials of the log
/// variables, so the result stays inside the expression grammar.
pub fn log_pullback(f: &RadialField) -> ScalarField {
    ScalarField::from_expr(pull(&f.ast))
}

/// Parse and pull back in one step.
pub fn log_pullback_text(text: &str) -> Result<ScalarField> {
    Ok(log_pullback(&RadialField::parse(text)?))
}

fn pull(e: &RadialExpr) -> Expr {
    match e {
        RadialExpr::Const(c) => Expr::Const(*c),
        RadialExpr::ModW => Expr::exp(Expr::var(Var::X)),
        RadialExpr::ModZ => Expr::exp(Expr::var(Var::T)),
        RadialExpr::Add(a, b) => Expr::add(pull(a), pull(b)),
        RadialExpr::Sub(a, b) => Expr::sub(pull(a), pull(b)),
        RadialExpr::Mul(a, b) => Expr::mul(pull(a), pull(b)),
        RadialExpr::Div(a, b) => Expr::div(pull(a), pull(b)),
        RadialExpr::PowI(a, n) => Expr::pow(pull(a), *n),
        RadialExpr::PowC(a, c) => Expr::exp(Expr::mul(Expr::Const(*c), symbolic_log(pull(a)))),
        RadialExpr::Neg(a) => Expr::neg(pull(a)),
        RadialExpr::Exp(a) => Expr::exp(pull(a)),
        RadialExpr::Log(a) => symbolic_log(pull(a)),
    }
}

/// A toric geodesic problem in log coordinates: boundary potentials as
/// functions of `x = log|w|`, and the left truncation of the unbounded
/// log image. Described by a JSON job file
/// `{"phi0": expr-in-x, "phi1": expr-in-x, "truncation": number}`.
#[derive(Debug, Clone)]
pub struct ToricProblem {
    pub phi0: ScalarField,
    pub phi1: ScalarField,
    pub truncation: f64,
}

impl ToricProblem {
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            phi0: String,
            phi1: String,
            truncation: Option<f64>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::InvalidDomain(format!(
            "toric job file: {}",
            e
        )))?;
        let truncation = raw.truncation.unwrap_or(DEFAULT_TRUNCATION);
        if !truncation.is_finite() || truncation >= 0.0 {
            return Err(Error::InvalidDomain(format!(
                "truncation bound must be finite and negative, got {}",
                truncation
            )));
        }
        Ok(ToricProblem {
            phi0: ScalarField::parse(&raw.phi0)?,
            phi1: ScalarField::parse(&raw.phi1)?,
            truncation,
        })
    }

    /// The truncated log-image domain `(truncation, 0)`.
    pub fn log_domain(&self) -> Result<SpaceDomain> {
        SpaceDomain::interval(self.truncation, 0.0)
    }
}

/// Verdicts of the toric plurisubharmonicity check on a log-coordinate grid:
/// discrete convexity of the pullback certifies psh-ness, and a vanishing
/// discrete determinant certifies the vanishing complex Monge-Ampere.
#[derive(Debug, Clone, Copy)]
pub struct ToricReport {
    pub convex: bool,
    pub min_directional: f64,
    pub degenerate: bool,
    pub max_normalized_det: f64,
    pub det_tolerance: f64,
    pub worst_det_point: [f64; 2],
}

/// Run the convexity and degeneracy checks on the sampled log-coordinate
/// field. Convexity uses directional second differences over the whole grid
/// (exact for convex functions). For the determinant, `exclude` masks nodes
/// whose stencil straddles a gluing interface, where the Hessian jump
/// pollutes the mixed entry; `det_tol` is the pass threshold on the
/// normalized determinant over the remaining nodes.
pub fn toric_psh_check(
    v: &GridField,
    exclude: Option<&dyn Fn(f64, f64) -> bool>,
    det_tol: f64,
) -> ToricReport {
    let conv = convexity_check(v);
    let g = v.grid();
    let mut max_det = 0.0f64;
    let mut worst = [f64::NAN, f64::NAN];
    for j in 1..g.nt() - 1 {
        for i in 1..g.nx() - 1 {
            let (x, t) = (g.x(i), g.t(j));
            if exclude.is_some_and(|f| f(x, t)) {
                continue;
            }
            let hess = discrete_hessian(v, i, j);
            let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
            let norm2 =
                hess[0][0] * hess[0][0] + 2.0 * hess[0][1] * hess[0][1] + hess[1][1] * hess[1][1];
            let nd = det.abs() / (1.0 + norm2);
            if nd > max_det {
                max_det = nd;
                worst = [x, t];
            }
        }
    }
    ToricReport {
        convex: conv.pass(),
        min_directional: conv.min_directional,
        degenerate: max_det <= det_tol,
        max_normalized_det: max_det,
        det_tolerance: det_tol,
        worst_det_point: worst,
    }
}

/// A sampled complex Hessian of the toric example: Hermitian by
/// construction, vanishing determinant, nonnegative eigenvalues.
#[derive(Debug, Clone, Copy)]
pub struct ComplexHessianSample {
    pub w: Complex64,
    pub z: Complex64,
    pub entries: [[Complex64; 2]; 2],
    pub det: Complex64,
    pub min_eigenvalue: f64,
    pub region: u8,
}

const LN2: f64 = std::f64::consts::LN_2;

/// The complex Hessian of the toric example at `(w, z)` inside the disc
/// times the annulus, transcribed from its two regional closed forms. Points
/// on the axis set `w = 0` are rejected: the regularity statement excludes
/// them and the region-2 entries are singular there.
pub fn example4_complex_hessian(w: Complex64, z: Complex64) -> Result<ComplexHessianSample> {
    let rw = w.norm();
    let rz = z.norm();
    if rw == 0.0 {
        return Err(Error::AxisPoint("w = 0 lies on the axis set".into()));
    }
    if rw >= 1.0 || rz <= 1.0 || rz >= std::f64::consts::E {
        return Err(Error::InvalidDomain(format!(
            "(|w|, |z|) = ({}, {}) outside the disc times the annulus",
            rw, rz
        )));
    }
    let region_1 = rw / rz.powf(LN2 / 2.0) < 1.0 / std::f64::consts::SQRT_2;
    let entries = if region_1 {
        let denom = rz.powf(LN2 + 2.0);
        let e11 = Complex64::new(LN2 * LN2 * rw * rw / (2.0 * denom), 0.0);
        let e12 = -z * w.conj() * LN2 / denom;
        let e22 = Complex64::new(2.0 / rz.powf(LN2), 0.0);
        [[e11, e12], [e12.conj(), e22]]
    } else {
        let c = 1.0 - rz.ln();
        let l = (rw * rw).ln();
        let amp = (l / c).exp();
        let e11 = Complex64::new(l * l / (2.0 * c * c * c * rz * rz) * amp, 0.0);
        let e12 = z * w.conj() * (l / (c * c * rz * rz * rw * rw) * amp);
        let e22 = Complex64::new(2.0 / (rw * rw * c) * amp, 0.0);
        [[e11, e12], [e12.conj(), e22]]
    };
    let det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
    let tr = entries[0][0].re + entries[1][1].re;
    let disc = (tr * tr - 4.0 * det.re).max(0.0).sqrt();
    Ok(ComplexHessianSample {
        w,
        z,
        entries,
        det,
        min_eigenvalue: 0.5 * (tr - disc),
        region: if region_1 { 1 } else { 2 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Provenance, SpaceTimeGrid};
    use crate::oracles;
    use rand::{Rng, SeedableRng};

    #[test]
    fn pullback_of_reference_pieces() {
        // 2|w|^2/|z|^log(2) + log(|z|) - 2 pulls back to 2 e^{2x - t log 2} + t - 2
        let f = RadialField::parse("2*|w|^2/|z|^log(2)+log(|z|)-2").unwrap();
        let v = log_pullback(&f);
        let expect = ScalarField::parse("2*exp(2*x-log(2)*t)+t-2").unwrap();
        for (x, t) in [(-0.5, 0.3), (-2.0, 0.9), (-0.01, 0.01)] {
            assert!((v.eval(x, t) - expect.eval(x, t)).abs() < 1e-12);
        }
        // |w|^2 - 1 -> e^{2x} - 1
        let g = log_pullback(&RadialField::parse("|w|^2-1").unwrap());
        assert!((g.eval(-0.5, 0.0) - ((-1.0f64).exp() - 1.0)).abs() < 1e-15);
        // the second reference piece
        let h = RadialField::parse("2*(1-log(|z|))*(exp(log(|w|^2)/(1-log(|z|)))-1)").unwrap();
        let vh = log_pullback(&h);
        let expect_h = ScalarField::parse("2*(1-t)*(exp(2*x/(1-t))-1)").unwrap();
        for (x, t) in [(-0.2, 0.4), (-1.5, 0.1), (-0.05, 0.85)] {
            assert!(
                (vh.eval(x, t) - expect_h.eval(x, t)).abs() < 1e-12,
                "at ({}, {}): {} vs {}",
                x,
                t,
                vh.eval(x, t),
                expect_h.eval(x, t)
            );
        }
    }

    #[test]
    fn pullback_round_trip() {
        let texts = [
            "2*|w|^2/|z|^log(2)+log(|z|)-2",
            "|w|^2-1",
            "2*(1-log(|z|))*(exp(log(|w|^2)/(1-log(|z|)))-1)",
            "|w|^3*|z|^2-|w|/|z|",
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for text in texts {
            let f = RadialField::parse(text).unwrap();
            let v = log_pullback(&f);
            for _ in 0..50 {
                let r: f64 = rng.gen_range(0.05..0.99);
                let s: f64 = rng.gen_range(1.01..2.6);
                let direct = f.eval(r, s);
                let pulled = v.eval(r.ln(), s.ln());
                assert!(
                    (direct - pulled).abs() <= 1e-12 * (1.0 + direct.abs()),
                    "`{}` at ({}, {}): {} vs {}",
                    text,
                    r,
                    s,
                    direct,
                    pulled
                );
            }
        }
    }

    #[test]
    fn non_toric_input_rejected() {
        assert!(matches!(
            RadialField::parse("x^2-1"),
            Err(Error::NonToric(_))
        ));
        assert!(RadialField::parse("|w|^|z|").is_err());
    }

    #[test]
    fn psh_check_on_reference_example() {
        let grid = SpaceTimeGrid::over_interval(-4.0, 0.0, 513, 129).unwrap();
        let (v, _) = oracles::sample_example4(&grid).unwrap();
        let near_interface = |x: f64, t: f64| {
            let d = (x - oracles::example4_interface(t)).abs()
                / (1.0 + (LN2 / 2.0) * (LN2 / 2.0)).sqrt();
            d <= 0.2
        };
        let report = toric_psh_check(&v, Some(&near_interface), 1e-4);
        assert!(report.convex, "min directional {}", report.min_directional);
        assert!(
            report.degenerate,
            "normalized det {} at {:?}",
            report.max_normalized_det, report.worst_det_point
        );
    }

    #[test]
    fn psh_check_model_fields() {
        let grid = SpaceTimeGrid::over_interval(-4.0, 0.0, 65, 65).unwrap();
        // t-independent convex field: rank-1 Hessian, det = 0
        let v = GridField::sample(grid.clone(), Provenance::Oracle, |x, _| (2.0 * x).exp() - 1.0)
            .unwrap();
        let rep = toric_psh_check(&v, None, 1e-8);
        assert!(rep.convex && rep.degenerate);
        // concave field fails convexity
        let bad = GridField::sample(grid, Provenance::Oracle, |x, _| -x * x).unwrap();
        assert!(!toric_psh_check(&bad, None, 1e-8).convex);
    }

    #[test]
    fn complex_hessian_regions_and_determinants() {
        // region 1 sample from the printed matrix: entry (2,2) at |z| = 1+ is 2
        let w = Complex64::from_polar(0.1, 0.3);
        let z = Complex64::from_polar(1.0 + 1e-12, -1.1);
        let h = example4_complex_hessian(w, z).unwrap();
        assert_eq!(h.region, 1);
        assert!((h.entries[1][1].re - 2.0).abs() < 1e-9);
        assert!(h.det.norm() < 1e-12);
        // Hermitian by construction
        assert_eq!(h.entries[0][1], h.entries[1][0].conj());
    }

    #[test]
    fn complex_hessian_random_samples_degenerate_and_semipositive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut seen = [0usize; 2];
        while seen.iter().any(|&c| c < 100) {
            let rw: f64 = rng.gen_range(0.05..0.95);
            let rz: f64 = rng.gen_range(1.05..f64::exp(1.0) - 0.05);
            let w = Complex64::from_polar(rw, rng.gen_range(0.0..6.28));
            let z = Complex64::from_polar(rz, rng.gen_range(0.0..6.28));
            let h = example4_complex_hessian(w, z).unwrap();
            seen[(h.region - 1) as usize] += 1;
            assert!(h.det.norm() <= 1e-12, "det {} in region {}", h.det.norm(), h.region);
            assert!(h.min_eigenvalue >= -1e-12);
        }
    }

    #[test]
    fn axis_point_rejected() {
        let z = Complex64::from_polar(1.5, 0.0);
        assert!(matches!(
            example4_complex_hessian(Complex64::new(0.0, 0.0), z),
            Err(Error::AxisPoint(_))
        ));
        assert!(example4_complex_hessian(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn complex_hessian_matches_log_pullback_derivatives() {
        // H[i][j] relates to the log-coordinate Hessian of the pullback:
        // d^2/dz dzbar = v_tt / (4|z|^2), d^2/dw dwbar = v_xx / (4|w|^2),
        // d^2/dz dwbar = v_xt / (4 z wbar)
        let sol = oracles::example4_solution();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..400 {
            let rw: f64 = rng.gen_range(0.05..0.95);
            let rz: f64 = rng.gen_range(1.05..f64::exp(1.0) - 0.05);
            let w = Complex64::from_polar(rw, rng.gen_range(0.0..6.28));
            let z = Complex64::from_polar(rz, rng.gen_range(0.0..6.28));
            let h = example4_complex_hessian(w, z).unwrap();
            let (x, t) = (rw.ln(), rz.ln());
            let v = &sol.pieces[(h.region - 1) as usize];
            let vxx = v.differentiate(Var::X).differentiate(Var::X).eval(x, t);
            let vtt = v.differentiate(Var::T).differentiate(Var::T).eval(x, t);
            let vxt = v.differentiate(Var::X).differentiate(Var::T).eval(x, t);
            let scale = 1.0 + h.entries[0][0].norm() + h.entries[1][1].norm();
            assert!((h.entries[0][0].re - vtt / (4.0 * rz * rz)).abs() <= 1e-10 * scale);
            assert!((h.entries[1][1].re - vxx / (4.0 * rw * rw)).abs() <= 1e-10 * scale);
            // the printed matrix carries d^2 u / dw dzbar in its (1,2) slot
            let mixed = Complex64::new(vxt, 0.0) / (4.0 * z.conj() * w);
            assert!((h.entries[0][1] - mixed).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn region2_second_derivatives_blow_up_along_the_boundary() {
        // sup over the region-2 slice {t in [1-r, 1-r/2]} of |v2_xx| grows
        // without bound as r -> 0; the sup runs over the region's x-range
        // (at fixed x < 0 the entries decay, the blow-up happens as x -> 0).
        let v2 = oracles::example4_solution().pieces[1].clone();
        let v2xx = v2.differentiate(Var::X).differentiate(Var::X);
        let mut previous = 0.0f64;
        for k in 0..4 {
            let r = 0.1 / f64::powi(2.0, k);
            let mut sup = 0.0f64;
            for p in 0..200 {
                let t = 1.0 - r + (r / 2.0) * (p as f64) / 199.0;
                for q in 0..200 {
                    let x = oracles::example4_interface(t) * (q as f64) / 199.0;
                    sup = sup.max(v2xx.eval(x, t).abs());
                }
            }
            assert!(sup > 1.8 * previous, "sup {} at r = {}", sup, r);
            previous = sup;
        }
        assert!(previous > 100.0);
    }

    #[test]
    fn toric_problem_from_json() {
        let p = ToricProblem::from_json(
            r#"{"phi0": "2*(exp(2*x)-1)", "phi1": "exp(2*x)-1", "truncation": -4}"#,
        )
        .unwrap();
        assert_eq!(p.truncation, -4.0);
        assert!((p.phi0.eval_space(0.0)).abs() < 1e-15);
        let d = p.log_domain().unwrap();
        assert_eq!(d.as_interval().unwrap(), (-4.0, 0.0));
        assert!(ToricProblem::from_json(r#"{"phi0": "x", "phi1": "x", "truncation": 1}"#).is_err());
    }
}
