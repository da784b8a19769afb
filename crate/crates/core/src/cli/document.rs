//! JSON input documents and their conversion into engine types.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{LaurentSeries, NumberField, Rational, Scalar, Zero};
use crate::cdvf::{DiffOperator, Gauge};
use crate::cycles::MonomialLogModule;
use crate::euler::{ChernData, CurveGeometry, GeometryData, Puncture, SurfaceComponent, SurfaceGeometry};
use crate::goodmodel::{Chart, GoodModel, ModelSummand};

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub schema: u32,
    #[serde(default)]
    pub field: FieldSpec,
    pub chart: ChartSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kummer: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub model: Vec<SummandSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySpec>,
    /// Points as coordinate lists in chart order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<CoeffSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            base: "Q".into(),
            extension: None,
        }
    }
}

/// `K = Q[a]/(modulus)`, modulus coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub generator: String,
    pub modulus: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub vars: Vec<String>,
    pub log_vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandSpec {
    pub phi: Vec<TermSpec>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: CoeffSpec,
    pub exp: Vec<ExpSpec>,
}

/// A rational `"p/q"` (or integer), or the coordinates of a field element
/// in powers of the generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Int(i64),
    Rational(String),
    Element(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpSpec {
    Int(i64),
    Rational(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    /// `x⁻¹k[x]/k[x]` on the line.
    Skyscraper,
    /// The lattice `x^shift·k[x]` of `E(x^{-b})`.
    Lattice {
        b: Vec<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shift: Option<Vec<i64>>,
    },
    Free { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    Curve {
        genus: u32,
        punctures: Vec<PunctureSpec>,
    },
    Surface {
        #[serde(rename = "chi_U")]
        chi_u: i64,
        components: Vec<ComponentSpec>,
        intersections: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chern: Option<ChernSpec>,
    },
}

/// Exactly one of the three sources of irregularity data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PunctureSpec {
    pub name: String,
    /// The puncture is `var = 0` on the chart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_divisor: Option<String>,
    /// The puncture is `var = ∞` of a one-variable chart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_infinity_of: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irr: Option<Vec<ExpSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub name: String,
    pub chi_open: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernSpec {
    pub c2: i64,
    pub c1_dot: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    #[serde(default)]
    pub field: FieldSpec,
    /// `"d/dt"` or `"tdt"`.
    pub gauge: String,
    pub order: usize,
    /// Per `c_1..c_d`, a list of `[exponent, coefficient]` terms.
    pub coeffs: Vec<Vec<(i64, CoeffSpec)>>,
    /// Known t-adic precision of every coefficient; exact when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    Rational::from_str(s.trim()).map_err(|_| CliError::Schema(format!("not an exact rational: {s:?}")))
}

fn exp_value(e: &ExpSpec) -> Result<Rational, CliError> {
    match e {
        ExpSpec::Int(k) => Ok(Rational::from_integer((*k).into())),
        ExpSpec::Rational(s) => parse_rational(s),
    }
}

impl FieldSpec {
    pub fn build(&self) -> Result<Option<Arc<NumberField>>, CliError> {
        if self.base != "Q" {
            return Err(CliError::Schema(format!("unsupported base field {:?}", self.base)));
        }
        match &self.extension {
            None => Ok(None),
            Some(ext) => {
                let modulus = ext
                    .modulus
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()?;
                let f = NumberField::new(modulus, &ext.generator)
                    .map_err(|e| CliError::Schema(e.to_string()))?;
                Ok(Some(Arc::new(f)))
            }
        }
    }
}

pub fn coeff_value(c: &CoeffSpec, field: &Option<Arc<NumberField>>) -> Result<Scalar, CliError> {
    match c {
        CoeffSpec::Int(k) => Ok(Scalar::int(*k)),
        CoeffSpec::Rational(s) => Ok(Scalar::rational(parse_rational(s)?)),
        CoeffSpec::Element(v) => {
            let Some(f) = field else {
                return Err(CliError::Schema("field element given but no extension declared".into()));
            };
            if v.len() > f.degree() {
                return Err(CliError::Schema("field element has too many coordinates".into()));
            }
            let coeffs = v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(Scalar::from_coeffs(coeffs, Some(f.clone())))
        }
    }
}

/// Everything a command needs from a model document.
pub struct Loaded {
    pub chart: Chart,
    pub model: Option<GoodModel>,
    pub module: Option<MonomialLogModule>,
    pub geometry: Option<LoadedGeometry>,
    pub points: Vec<Vec<Scalar>>,
    pub field: Option<Arc<NumberField>>,
}

pub struct LoadedGeometry {
    pub data: GeometryData,
    pub chern: Option<ChernData>,
    /// For curves, where each puncture's data comes from.
    pub sources: Vec<PunctureSource>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PunctureSource {
    Chart(usize),
    Infinity(usize),
    Explicit,
}

impl ModelDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if doc.schema != SCHEMA_VERSION {
            return Err(CliError::Schema(format!("unsupported schema version {}", doc.schema)));
        }
        Ok(doc)
    }

    pub fn load(&self) -> Result<Loaded, CliError> {
        let field = self.field.build()?;
        let chart = self.chart_value()?;
        let n = chart.n();
        let model = if self.model.is_empty() {
            None
        } else {
            Some(self.model_value(&chart, &field)?)
        };
        let module = self.module.as_ref().map(|m| module_value(m, &chart)).transpose()?;
        if model.is_none() && module.is_none() {
            return Err(CliError::Schema("document has neither a model nor a module".into()));
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                if p.len() != n {
                    return Err(CliError::Schema(format!("point must have {n} coordinates")));
                }
                p.iter().map(|c| coeff_value(c, &field)).collect()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let geometry = self
            .geometry
            .as_ref()
            .map(|g| geometry_value(g, &chart, model.as_ref()))
            .transpose()?;
        Ok(Loaded {
            chart,
            model,
            module,
            geometry,
            points,
            field,
        })
    }

    fn chart_value(&self) -> Result<Chart, CliError> {
        let vars = &self.chart.vars;
        for v in &self.chart.log_vars {
            if !vars.contains(v) {
                return Err(CliError::Schema(format!("log variable {v:?} is not a chart variable")));
            }
        }
        let flags = vars.iter().map(|v| self.chart.log_vars.contains(v)).collect();
        Chart::new(vars.clone(), flags).map_err(|e| CliError::Schema(e.to_string()))
    }

    fn model_value(&self, chart: &Chart, field: &Option<Arc<NumberField>>) -> Result<GoodModel, CliError> {
        let n = chart.n();
        let mut summands = Vec::new();
        for (a, s) in self.model.iter().enumerate() {
            let mut terms = Vec::new();
            for t in &s.phi {
                if t.exp.len() != n {
                    return Err(CliError::Schema(format!(
                        "summand {}: exponent has {} entries, chart has {n} variables",
                        a + 1,
                        t.exp.len()
                    )));
                }
                let e = t.exp.iter().map(exp_value).collect::<Result<Vec<_>, _>>()?;
                terms.push((coeff_value(&t.coeff, field)?, e));
            }
            summands.push((terms, s.rank));
        }
        let m = GoodModel::from_rational_exponents(chart.clone(), summands)?;
        match &self.kummer {
            None => Ok(m),
            Some(h) => {
                if h.len() != n {
                    return Err(CliError::Schema(format!("kummer must have {n} entries")));
                }
                let factors = h
                    .iter()
                    .zip(m.kummer())
                    .map(|(&want, &have)| {
                        if want >= 1 && want % have == 0 {
                            Ok(want / have)
                        } else {
                            Err(CliError::Schema(format!(
                                "Kummer denominator {want} does not clear exponent denominator {have}"
                            )))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(m.refine_cover(&factors)?)
            }
        }
    }
}

fn module_value(m: &ModuleSpec, chart: &Chart) -> Result<MonomialLogModule, CliError> {
    let n = chart.n();
    let module = match m {
        ModuleSpec::Skyscraper => MonomialLogModule::skyscraper(),
        ModuleSpec::Lattice { b, shift } => {
            let shift = shift.clone().unwrap_or_else(|| vec![0; b.len()]);
            if shift.len() != b.len() {
                return Err(CliError::Schema("lattice shift and b differ in length".into()));
            }
            MonomialLogModule::exp_lattice(b, &shift)
        }
        ModuleSpec::Free { n } => MonomialLogModule::free(*n),
    };
    if module.nvars() != n {
        return Err(CliError::Schema(format!(
            "module lives in {} variables, chart has {n}",
            module.nvars()
        )));
    }
    Ok(module)
}

fn var_index(chart: &Chart, v: &str) -> Result<usize, CliError> {
    chart
        .names()
        .iter()
        .position(|x| x == v)
        .ok_or_else(|| CliError::Schema(format!("unknown variable {v:?}")))
}

fn geometry_value(g: &GeometrySpec, chart: &Chart, model: Option<&GoodModel>) -> Result<LoadedGeometry, CliError> {
    match g {
        GeometrySpec::Curve { genus, punctures } => {
            let mut out = Vec::new();
            let mut sources = Vec::new();
            for p in punctures {
                let given = [p.chart_divisor.is_some(), p.at_infinity_of.is_some(), p.irr.is_some()];
                if given.iter().filter(|&&b| b).count() != 1 {
                    return Err(CliError::Schema(format!(
                        "puncture {:?} needs exactly one of chart_divisor, at_infinity_of, irr",
                        p.name
                    )));
                }
                let (irr, source) = if let Some(v) = &p.chart_divisor {
                    let j = var_index(chart, v)?;
                    if !chart.log_vars()[j] {
                        return Err(CliError::Schema(format!("{v:?} is not a log variable")));
                    }
                    let m = model.ok_or_else(|| CliError::Schema("chart_divisor needs a model".into()))?;
                    (m.irregularity_divisor().along(j), PunctureSource::Chart(j))
                } else if let Some(v) = &p.at_infinity_of {
                    let j = var_index(chart, v)?;
                    if chart.n() != 1 {
                        return Err(CliError::Schema("at_infinity_of needs a one-variable chart".into()));
                    }
                    let m = model.ok_or_else(|| CliError::Schema("at_infinity_of needs a model".into()))?;
                    (infinity_irregularities(m, j), PunctureSource::Infinity(j))
                } else {
                    let irr = p.irr.as_ref().unwrap().iter().map(exp_value).collect::<Result<Vec<_>, _>>()?;
                    (irr, PunctureSource::Explicit)
                };
                out.push(Puncture {
                    name: p.name.clone(),
                    irr,
                });
                sources.push(source);
            }
            Ok(LoadedGeometry {
                data: GeometryData::Curve(CurveGeometry {
                    genus: *genus,
                    punctures: out,
                }),
                chern: None,
                sources,
            })
        }
        GeometrySpec::Surface {
            chi_u,
            components,
            intersections,
            chern,
        } => {
            if chart.n() != 2 {
                return Err(CliError::Schema("surface geometry needs a two-variable chart".into()));
            }
            let data = SurfaceGeometry {
                chi_u: *chi_u,
                components: components
                    .iter()
                    .map(|c| SurfaceComponent {
                        name: c.name.clone(),
                        chi_open: c.chi_open,
                    })
                    .collect(),
                intersections: intersections.clone(),
            };
            data.check().map_err(|e| CliError::Schema(e.to_string()))?;
            if chart.m() > components.len() {
                return Err(CliError::Schema("fewer components than boundary coordinates".into()));
            }
            let chern = chern
                .as_ref()
                .map(|c| {
                    if c.c1_dot.len() != components.len() {
                        return Err(CliError::Schema("c1_dot must list one degree per component".into()));
                    }
                    Ok(ChernData {
                        top: c.c2,
                        c1_dot: c.c1_dot.clone(),
                        from_topology: false,
                    })
                })
                .transpose()?;
            Ok(LoadedGeometry {
                data: GeometryData::Surface(data),
                chern,
                sources: Vec::new(),
            })
        }
    }
}

/// Pole orders at `x_j = ∞`, one per row, largest first.
fn infinity_irregularities(m: &GoodModel, j: usize) -> Vec<Rational> {
    let h = m.kummer()[j];
    let mut out: Vec<Rational> = m
        .summands()
        .iter()
        .flat_map(|s| {
            let top = s.phi.max_exponent(j).unwrap_or(0).max(0);
            std::iter::repeat_n(Rational::new(top.into(), h.into()), s.rank)
        })
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// The model in the coordinate `1/x_j` of a one-variable chart.
pub fn model_at_infinity(m: &GoodModel) -> Result<GoodModel, CliError> {
    let summands = m
        .summands()
        .iter()
        .map(|s| {
            let mut phi = crate::algebra::LaurentPolynomial::zero(1);
            for (e, c) in s.phi.terms() {
                phi.add_term(c.clone(), vec![-e[0]]);
            }
            ModelSummand::new(phi, s.rank)
        })
        .collect();
    Ok(GoodModel::new(m.chart().clone(), summands, m.kummer().to_vec())?)
}

impl OperatorDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: OperatorDocument = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if let Some(v) = doc.schema {
            if v != SCHEMA_VERSION {
                return Err(CliError::Schema(format!("unsupported schema version {v}")));
            }
        }
        Ok(doc)
    }

    pub fn operator(&self) -> Result<DiffOperator, CliError> {
        let gauge = match self.gauge.as_str() {
            "d/dt" => Gauge::D,
            "tdt" => Gauge::Theta,
            g => return Err(CliError::Schema(format!("unknown gauge {g:?}, expected \"d/dt\" or \"tdt\""))),
        };
        if self.coeffs.len() != self.order || self.order == 0 {
            return Err(CliError::Schema(format!(
                "order {} but {} coefficient lists",
                self.order,
                self.coeffs.len()
            )));
        }
        let field = self.field.build()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let terms = c
                    .iter()
                    .map(|(e, v)| Ok((*e, coeff_value(v, &field)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                let s = LaurentSeries::exact(terms.into_iter().filter(|(_, v)| !v.is_zero()));
                Ok(match self.precision {
                    Some(p) => s.with_precision(p),
                    None => s,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(DiffOperator::new(gauge, coeffs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KATO: &str = r#"{"schema":1, "field":{"base":"Q"}, "chart":{"vars":["x","y"],"log_vars":["x","y"]},
     "model":[{"phi":[{"coeff":"1","exp":[-2,-3]}],"rank":1}],
     "geometry":{"kind":"surface","chi_U":1,"components":[{"name":"D1","chi_open":1},{"name":"D2","chi_open":1}],"intersections":[[0,1],[1,0]]}}"#;

    #[test]
    fn normative_example_parses_and_round_trips() {
        let doc = ModelDocument::from_json(KATO).unwrap();
        let again = ModelDocument::from_json(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again);
        let l = doc.load().unwrap();
        assert_eq!(l.model.unwrap().rank(), 1);
        assert!(matches!(l.geometry.unwrap().data, GeometryData::Surface(_)));
    }

    #[test]
    fn schema_violations() {
        assert!(ModelDocument::from_json(&KATO.replace("\"schema\":1", "\"schema\":2")).is_err());
        let bad_arity = KATO.replace("[-2,-3]", "[-2]");
        assert!(ModelDocument::from_json(&bad_arity).unwrap().load().is_err());
        assert!(ModelDocument::from_json(&KATO.replace("\"1\"", "\"one\"")).unwrap().load().is_err());
    }

    #[test]
    fn fractional_exponents_and_extensions() {
        let text = r#"{"schema":1,
          "field":{"base":"Q","extension":{"generator":"a","modulus":["-2","0","1"]}},
          "chart":{"vars":["t"],"log_vars":["t"]},
          "model":[{"phi":[{"coeff":["0","1"],"exp":["-1/2"]}],"rank":1}]}"#;
        let l = ModelDocument::from_json(text).unwrap().load().unwrap();
        let m = l.model.unwrap();
        assert_eq!(m.kummer(), &[2]);
        assert!(m.field().is_some());
    }

    #[test]
    fn operator_document() {
        let text = r#"{"gauge":"d/dt","order":2,"coeffs":[[],[[-3,"-1"]]]}"#;
        let op = OperatorDocument::from_json(text).unwrap().operator().unwrap();
        assert_eq!(op.order(), 2);
        assert!(OperatorDocument::from_json(&text.replace("d/dt", "dt")).unwrap().operator().is_err());
    }
}
