use std::time::Instant;

use kacv_core::ffield::FiniteField;
use kacv_core::hn::{hn_sweep, hom_vanishing_sweep, m_table, verify_m_equals_r};
use kacv_core::kacmoody::{pbw_dimensions, root_multiplicities};
use kacv_core::moment::{
    admissible_prime_powers, is_admissible, kac_polynomial_with_weight, kac_value, verify_lambda_independence,
};
use kacv_core::poly::betti_from_kac;
use kacv_core::quiver::{find_generic_weight, is_indivisible, DimVector, WeightVector};
use kacv_core::rep::{count_abs_indec_classes, EnumConfig};

use crate::file::QuiverFile;
use crate::report::{Check, Report};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Moment,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    ConjA,
    ConjB,
    Appendix,
    Hn,
    All,
}

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct Options {
    pub budget: u64,
    pub max_prime: u32,
    pub workers: usize,
    pub timings: bool,
    /// Field orders from `--q`.
    pub fields: Option<Vec<u32>>,
    /// Weight label or literal from `--weight`.
    pub weight: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: kacv_core::rep::DEFAULT_BUDGET,
            max_prime: 97,
            workers: 1,
            timings: false,
            fields: None,
            weight: None,
        }
    }
}

impl Options {
    fn cfg(&self) -> EnumConfig {
        EnumConfig::default().with_budget(self.budget).with_workers(self.workers)
    }
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn timed(check: impl FnOnce() -> Result<Check, CliError>) -> Result<Check, CliError> {
    let start = Instant::now();
    let mut c = check()?;
    c.elapsed = start.elapsed();
    Ok(c)
}

fn start(command: &str, file: &QuiverFile, dim_key: &str, a: &DimVector, opts: &Options) -> Report {
    let mut r = Report::new(command);
    if let Some(p) = &file.path {
        r.echo("file", p.display());
    }
    r.echo("dim", format!("{dim_key}:{a}"));
    r.timings = opts.timings;
    r
}

/// The `--weight` choice, or the smallest generic weight.
fn weight_for(file: &QuiverFile, a: &DimVector, opts: &Options) -> Result<WeightVector, CliError> {
    match &opts.weight {
        Some(key) => file.weight(key),
        None => Ok(find_generic_weight(a)?),
    }
}

pub fn cmd_kac(file: &QuiverFile, dim_key: &str, method: Method, opts: &Options) -> Result<Report, CliError> {
    let q = &file.quiver;
    let a = file.dim(dim_key)?;
    let cfg = opts.cfg();
    let mut r = start("kac", file, dim_key, &a, opts);
    r.echo("method", format!("{method:?}").to_lowercase());
    let needs_weight = method != Method::Direct || opts.fields.is_none();
    let lambda = if needs_weight { Some(weight_for(file, &a, opts)?) } else { None };
    if let Some(l) = &lambda {
        r.echo("weight", l);
    }
    let Some(fields) = &opts.fields else {
        let lambda = lambda.expect("weight resolved above");
        let started = Instant::now();
        let interp = kac_polynomial_with_weight(q, &a, &lambda, &cfg, opts.max_prime)?;
        let samples: Vec<String> = interp.samples.iter().map(|(q, v)| format!("{q}:{v}")).collect();
        let p = &interp.polynomial;
        r.row("polynomial", vec![("coefficients", p.to_string())]);
        let mut c = Check::new("kac_polynomial", true)
            .field("samples", samples.join(","))
            .field("degree_bound", p.degree_bound())
            .field("coefficients", p);
        c.elapsed = started.elapsed();
        r.push(c);
        return Ok(r);
    };
    r.echo("q", list(fields));
    for &order in fields {
        let field = FiniteField::of_order(order)?;
        let check = timed(|| {
            let direct = match method {
                Method::Moment => None,
                _ => Some(count_abs_indec_classes(q, &a, &field, &cfg)?),
            };
            let moment = match (&lambda, method) {
                (Some(l), Method::Moment | Method::Both) => Some(kac_value(q, &a, l, &field, &cfg)?),
                _ => None,
            };
            let pass = match (&direct, &moment) {
                (Some(d), Some(m)) => d == m,
                _ => true,
            };
            let mut c = Check::new("kac", pass).field("q", order);
            if let Some(d) = direct {
                c = c.field("direct", d);
            }
            if let Some(m) = moment {
                c = c.field("moment", m);
            }
            Ok(c)
        })?;
        r.push(check);
    }
    Ok(r)
}

pub fn cmd_verify(file: &QuiverFile, dim_key: &str, which: Which, opts: &Options) -> Result<Report, CliError> {
    let q = &file.quiver;
    let a = file.dim(dim_key)?;
    let cfg = opts.cfg();
    let mut r = start("verify", file, dim_key, &a, opts);
    r.echo("which", format!("{which:?}").to_lowercase());
    if !is_indivisible(&a)? {
        return Err(kacv_core::Error::Divisible(a.0.clone()).into());
    }
    let lambda = weight_for(file, &a, opts)?;
    r.echo("weight", &lambda);
    let all = which == Which::All;

    if all || matches!(which, Which::ConjA | Which::ConjB) {
        let start = Instant::now();
        let interp = kac_polynomial_with_weight(q, &a, &lambda, &cfg, opts.max_prime)?;
        let elapsed = start.elapsed();
        let p = &interp.polynomial;
        let samples: Vec<String> = interp.samples.iter().map(|(q, v)| format!("{q}:{v}")).collect();
        if all || which == Which::ConjA {
            let mut c = Check::new("conjA", p.has_nonnegative_coefficients())
                .field("coefficients", p)
                .field("samples", samples.join(","));
            if let Ok(betti) = betti_from_kac(p) {
                c = c.field("betti", list(&betti));
            }
            c.elapsed = elapsed;
            r.push(c);
        }
        if all || which == Which::ConjB {
            let c = timed(|| {
                let table = root_multiplicities(q, &a)?;
                let root = table.r(&a)?.clone();
                let constant = p.constant_term();
                Ok(Check::new("conjB", constant == root.into())
                    .field("expected", table.r(&a)?)
                    .field("actual", constant))
            })?;
            r.push(c);
        }
    }

    if all || which == Which::Appendix {
        let fields = match &opts.fields {
            Some(f) => f.clone(),
            None => admissible_prime_powers(&lambda, &a, opts.max_prime)?.into_iter().take(2).collect(),
        };
        for order in fields {
            let field = FiniteField::of_order(order)?;
            if !is_admissible(&lambda, &a, field.characteristic())? {
                return Err(CliError::Usage(format!("q={order} is not admissible for weight {lambda}")));
            }
            let c = timed(|| {
                let res = verify_lambda_independence(q, &a, &lambda, &field, &cfg)?;
                Ok(Check::new("appendix", res.holds())
                    .field("q", order)
                    .field("x", &res.x_count)
                    .field("xs", &res.xs_count))
            })?;
            r.push(c);
        }
    }

    if all || which == Which::Hn {
        let c = timed(|| {
            let m = verify_m_equals_r(q, &a, &lambda)?;
            Ok(Check::new("m_equals_r", m.holds())
                .field("m_recursive", &m.m_recursive)
                .field("m_closed", &m.m_closed)
                .field("r", &m.r))
        })?;
        r.push(c);
        let theta = lambda.negated();
        let field = FiniteField::of_order(opts.fields.as_ref().and_then(|f| f.first().copied()).unwrap_or(2))?;
        let double = q.double();
        for (name, quiver) in [("hn_sweep", q), ("hn_sweep_double", &double)] {
            let c = timed(|| {
                let s = hn_sweep(quiver, &a, &theta, Some(&lambda), &field, &cfg)?;
                Ok(Check::new(name, s.king_mismatches == 0)
                    .field("q", field.order())
                    .field("reps", s.reps)
                    .field("types", s.types.len())
                    .field("king_mismatches", s.king_mismatches))
            })?;
            r.push(c);
        }
        let c = timed(|| {
            let h = hom_vanishing_sweep(q, &a, &theta, &field, &cfg)?;
            Ok(Check::new("hom_vanishing", h.violations == 0)
                .field("q", field.order())
                .field("pairs", h.pairs)
                .field("violations", h.violations))
        })?;
        r.push(c);
    }
    Ok(r)
}

pub fn cmd_mult(file: &QuiverFile, dim_key: &str, opts: &Options) -> Result<Report, CliError> {
    let a = file.dim(dim_key)?;
    let mut r = start("mult", file, dim_key, &a, opts);
    let table = root_multiplicities(&file.quiver, &a)?;
    let n = pbw_dimensions(&table, &a)?;
    for (b, nb) in n.iter().filter(|(b, _)| !b.is_zero()) {
        r.row("mult", vec![("beta", b.to_string()), ("r", table.r(&b)?.to_string()), ("n", nb.to_string())]);
    }
    Ok(r)
}

pub fn cmd_hn(file: &QuiverFile, dim_key: &str, opts: &Options) -> Result<Report, CliError> {
    let q = &file.quiver;
    let a = file.dim(dim_key)?;
    let cfg = opts.cfg();
    let mut r = start("hn", file, dim_key, &a, opts);
    let lambda = weight_for(file, &a, opts)?;
    let theta = lambda.negated();
    r.echo("theta", &theta);
    let table = root_multiplicities(q, &a)?;
    let n = pbw_dimensions(&table, &a)?;
    for (g, m) in m_table(&a, &theta, &n)? {
        r.row("m", vec![("gamma", g.to_string()), ("m", m.to_string()), ("n", n.get(&g)?.to_string())]);
    }
    let order = opts.fields.as_ref().and_then(|f| f.first().copied()).unwrap_or(2);
    let field = FiniteField::of_order(order)?;
    let started = Instant::now();
    let s = hn_sweep(q, &a, &theta, None, &field, &cfg)?;
    let mut c = Check::new("hn_sweep", s.types.values().sum::<u64>() == s.reps).field("q", order).field("reps", s.reps);
    c.elapsed = started.elapsed();
    for (t, count) in &s.types {
        r.row("hn_type", vec![("type", t.to_string()), ("count", count.to_string())]);
    }
    r.push(c);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::file::parse_quiver_file;

    const K2: &str = "vertex v1\nvertex v2\narrow a v1 v2\narrow b v1 v2\ndim alpha 1,1\ndim box 2,2\n";
    const A2: &str = "vertex v1\nvertex v2\narrow a v1 v2\ndim alpha 1,1\n";

    fn with_fields(q: &[u32]) -> Options {
        Options { fields: Some(q.to_vec()), ..Options::default() }
    }

    #[test]
    fn kac_both_methods_agree() {
        let f = parse_quiver_file(K2).unwrap();
        let r = cmd_kac(&f, "alpha", Method::Both, &with_fields(&[2])).unwrap();
        assert!(r.to_string().contains("check=kac q=2 direct=3 moment=3 status=PASS"));
    }

    #[test]
    fn kac_polynomials() {
        let k2 = parse_quiver_file(K2).unwrap();
        let r = cmd_kac(&k2, "alpha", Method::Moment, &Options::default()).unwrap();
        assert!(r.to_string().contains("polynomial coefficients=1,1\n"));
        let a2 = parse_quiver_file(A2).unwrap();
        let r = cmd_kac(&a2, "alpha", Method::Moment, &Options::default()).unwrap();
        assert!(r.to_string().contains("polynomial coefficients=1\n"));
    }

    #[test]
    fn verify_pipelines() {
        let k2 = parse_quiver_file(K2).unwrap();
        let r = cmd_verify(&k2, "alpha", Which::All, &Options::default()).unwrap();
        assert!(r.passed(), "{r}");
        let a2 = parse_quiver_file(A2).unwrap();
        let r = cmd_verify(&a2, "alpha", Which::ConjB, &Options::default()).unwrap();
        assert!(r.to_string().contains("check=conjB expected=1 actual=1 status=PASS"));
        assert!(matches!(
            cmd_verify(&k2, "box", Which::ConjB, &Options::default()),
            Err(CliError::Core(kacv_core::Error::Divisible(_)))
        ));
    }

    #[test]
    fn mult_rows() {
        let k2 = parse_quiver_file(K2).unwrap();
        let out = cmd_mult(&k2, "box", &Options::default()).unwrap().to_string();
        assert!(out.contains("mult beta=1,1 r=1 n=2\n"));
        assert!(out.contains("mult beta=1,0 r=1 n=1\n"));
        assert!(out.contains("mult beta=2,1 r=1 "));
    }

    #[test]
    fn hn_report() {
        let k2 = parse_quiver_file(K2).unwrap();
        let out = cmd_hn(&k2, "alpha", &Options::default()).unwrap().to_string();
        assert!(out.contains("m gamma=1,1 m=1 n=2\n"), "{out}");
        assert!(out.contains("hn_type type=(0,1)|(1,0) count=4\n"), "{out}");
    }
}
