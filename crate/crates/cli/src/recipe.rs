//! Recipes: ordered construction steps that refer to earlier steps by id.
//!
//! A recipe is a JSON array of steps, or an object `{"steps": [...],
//! "output": id}`. Without `output` the last step is the result.

use std::collections::HashMap;

use reebspace::branched::{attach_double, bouquet, BranchedModel};
use reebspace::complex::ops::{barycentric_subdivision, disjoint_union, double, product, wedge};
use reebspace::complex::{standard_model, ComplexFile};
use reebspace::{SimplicialComplex, VertexId};
use serde_json::Value;
use thiserror::Error;

/// Parse or evaluation failure, located by step index and field.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{}{message}", location(*.step, .field))]
pub struct RecipeError {
    pub step: Option<usize>,
    pub field: String,
    pub message: String,
}

fn location(step: Option<usize>, field: &str) -> String {
    match (step, field.is_empty()) {
        (Some(i), false) => format!("step {i}, field `{field}`: "),
        (Some(i), true) => format!("step {i}: "),
        (None, false) => format!("field `{field}`: "),
        (None, true) => String::new(),
    }
}

fn fail<T>(step: Option<usize>, field: &str, message: impl Into<String>) -> Result<T, RecipeError> {
    Err(RecipeError { step, field: field.into(), message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Standard { name: String, params: Vec<i64> },
    FromFacets(ComplexFile),
    DisjointUnion { inputs: [String; 2] },
    Wedge { inputs: [String; 2], basepoints: [VertexId; 2] },
    Product { inputs: [String; 2] },
    Double { input: String },
    Subdivide { input: String },
    AttachFlap { input: String, sigma: String },
    AttachDouble { input: String, submanifolds: Vec<String> },
    Bouquet { inputs: Vec<String>, basepoints: Vec<VertexId> },
}

impl Op {
    fn inputs(&self) -> Vec<&String> {
        match self {
            Op::Standard { .. } | Op::FromFacets(_) => Vec::new(),
            Op::DisjointUnion { inputs } | Op::Wedge { inputs, .. } | Op::Product { inputs } => inputs.iter().collect(),
            Op::Double { input } | Op::Subdivide { input } => vec![input],
            Op::AttachFlap { input, .. } | Op::AttachDouble { input, .. } => vec![input],
            Op::Bouquet { inputs, .. } => inputs.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub id: String,
    pub op: Op,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub steps: Vec<Step>,
    pub output: String,
}

/// Keys read, in order, when a `standard` step has no `params` array.
const PARAM_KEYS: [&str; 7] = ["n", "k", "r", "a", "b", "genus", "boundary"];

struct Fields<'a> {
    step: usize,
    obj: &'a serde_json::Map<String, Value>,
}

impl Fields<'_> {
    fn get(&self, key: &str) -> Result<&Value, RecipeError> {
        match self.obj.get(key) {
            Some(v) => Ok(v),
            None => fail(Some(self.step), key, "missing"),
        }
    }

    fn string(&self, key: &str) -> Result<String, RecipeError> {
        match self.get(key)? {
            Value::String(s) => Ok(s.clone()),
            _ => fail(Some(self.step), key, "expected a string"),
        }
    }

    fn strings(&self, key: &str) -> Result<Vec<String>, RecipeError> {
        let Value::Array(items) = self.get(key)? else {
            return fail(Some(self.step), key, "expected an array of strings");
        };
        items
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or(()))
            .collect::<Result<_, _>>()
            .or_else(|_| fail(Some(self.step), key, "expected an array of strings"))
    }

    fn pair(&self, key: &str) -> Result<[String; 2], RecipeError> {
        let v = self.strings(key)?;
        match <[String; 2]>::try_from(v) {
            Ok(p) => Ok(p),
            Err(_) => fail(Some(self.step), key, "expected exactly two ids"),
        }
    }

    fn vertices(&self, key: &str) -> Result<Vec<VertexId>, RecipeError> {
        serde_json::from_value(self.get(key)?.clone())
            .or_else(|e| fail(Some(self.step), key, format!("expected vertex ids: {e}")))
    }
}

fn parse_step(step: usize, v: &Value) -> Result<Step, RecipeError> {
    let Value::Object(obj) = v else { return fail(Some(step), "", "a step must be an object") };
    let f = Fields { step, obj };
    let id = f.string("id")?;
    let op = match f.string("op")?.as_str() {
        "standard" => {
            let name = f.string("name")?;
            let params = match obj.get("params") {
                Some(p) => serde_json::from_value(p.clone())
                    .or_else(|_| fail(Some(step), "params", "expected an array of integers"))?,
                None => PARAM_KEYS
                    .iter()
                    .filter_map(|k| obj.get(*k).map(|v| (k, v)))
                    .map(|(k, v)| v.as_i64().ok_or(()).or_else(|_| fail(Some(step), k, "expected an integer")))
                    .collect::<Result<_, _>>()?,
            };
            Op::Standard { name, params }
        }
        "from_facets" => {
            let mut body = obj.clone();
            body.remove("id");
            body.remove("op");
            body.entry("vertices").or_insert_with(|| Value::Array(Vec::new()));
            let file: ComplexFile =
                serde_json::from_value(Value::Object(body)).or_else(|e| fail(Some(step), "facets", e.to_string()))?;
            Op::FromFacets(file)
        }
        "disjoint_union" => Op::DisjointUnion { inputs: f.pair("inputs")? },
        "wedge" => {
            let basepoints = f.vertices("basepoints")?;
            let Ok(basepoints) = <[VertexId; 2]>::try_from(basepoints) else {
                return fail(Some(step), "basepoints", "expected exactly two vertex ids");
            };
            Op::Wedge { inputs: f.pair("inputs")?, basepoints }
        }
        "product" => Op::Product { inputs: f.pair("inputs")? },
        "double" => Op::Double { input: f.string("input")? },
        "subdivide" => Op::Subdivide { input: f.string("input")? },
        "attach_flap" => Op::AttachFlap { input: f.string("input")?, sigma: f.string("sigma")? },
        "attach_double" => Op::AttachDouble { input: f.string("input")?, submanifolds: f.strings("submanifolds")? },
        "bouquet" => Op::Bouquet { inputs: f.strings("inputs")?, basepoints: f.vertices("basepoints")? },
        other => return fail(Some(step), "op", format!("unknown step type `{other}`")),
    };
    Ok(Step { id, op })
}

/// Parses and validates a recipe document.
pub fn parse_recipe(text: &str) -> Result<Recipe, RecipeError> {
    let v: Value = serde_json::from_str(text).or_else(|e| fail(None, "", format!("not JSON: {e}")))?;
    recipe_from_value(&v)
}

pub fn recipe_from_value(v: &Value) -> Result<Recipe, RecipeError> {
    let (steps, output) = match v {
        Value::Array(steps) => (steps, None),
        Value::Object(obj) => {
            let Some(Value::Array(steps)) = obj.get("steps") else {
                return fail(None, "steps", "expected an array of steps");
            };
            let output = match obj.get("output") {
                None => None,
                Some(Value::String(s)) => Some(s.clone()),
                Some(_) => return fail(None, "output", "expected a step id"),
            };
            (steps, output)
        }
        _ => return fail(None, "", "a recipe is an array of steps or an object with `steps`"),
    };
    if steps.is_empty() {
        return fail(None, "steps", "a recipe needs at least one step");
    }
    let mut parsed: Vec<Step> = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        let step = parse_step(i, s)?;
        if parsed.iter().any(|p| p.id == step.id) {
            return fail(Some(i), "id", format!("duplicate id `{}`", step.id));
        }
        for input in step.op.inputs() {
            if input == &step.id {
                return fail(Some(i), "input", format!("step `{input}` refers to itself"));
            }
            if !parsed.iter().any(|p| &p.id == input) {
                let later = steps.iter().skip(i + 1).any(|s| s.get("id").and_then(Value::as_str) == Some(input));
                let why = if later { "refers to a later step (cycle)" } else { "dangling reference" };
                return fail(Some(i), "input", format!("{why} `{input}`"));
            }
        }
        parsed.push(step);
    }
    let output = output.unwrap_or_else(|| parsed.last().expect("nonempty").id.clone());
    if !parsed.iter().any(|s| s.id == output) {
        return fail(None, "output", format!("dangling reference `{output}`"));
    }
    Ok(Recipe { steps: parsed, output })
}

impl Recipe {
    /// Builds every step and returns the output model. Plain operations
    /// drop branch annotations of their inputs.
    pub fn evaluate(&self) -> Result<BranchedModel, RecipeError> {
        let mut built: HashMap<&str, BranchedModel> = HashMap::new();
        for (i, step) in self.steps.iter().enumerate() {
            let err =
                |e: &dyn std::fmt::Display| RecipeError { step: Some(i), field: String::new(), message: e.to_string() };
            let get = |id: &String| built.get(id.as_str()).expect("validated reference");
            let plain = |c: SimplicialComplex| BranchedModel::plain(c);
            let model = match &step.op {
                Op::Standard { name, params } => plain(standard_model(name, params).map_err(|e| err(&e))?),
                Op::FromFacets(file) => plain(file.to_complex().map_err(|e| err(&e))?),
                Op::DisjointUnion { inputs: [a, b] } => plain(disjoint_union(&get(a).complex, &get(b).complex).0),
                Op::Wedge { inputs: [a, b], basepoints: [p, q] } => {
                    plain(wedge(&get(a).complex, p, &get(b).complex, q).map_err(|e| err(&e))?)
                }
                Op::Product { inputs: [a, b] } => {
                    plain(product(&get(a).complex, &get(b).complex).map_err(|e| err(&e))?.complex)
                }
                Op::Double { input } => plain(double(&get(input).complex).map_err(|e| err(&e))?),
                Op::Subdivide { input } => plain(barycentric_subdivision(&get(input).complex)),
                Op::AttachFlap { input, sigma } => get(input).clone().attach_flap(sigma).map_err(|e| err(&e))?,
                Op::AttachDouble { input, submanifolds } => {
                    let names: Vec<&str> = submanifolds.iter().map(String::as_str).collect();
                    attach_double(&get(input).complex, &names).map_err(|e| err(&e))?
                }
                Op::Bouquet { inputs, basepoints } => {
                    let parts: Vec<BranchedModel> = inputs.iter().map(|id| get(id).clone()).collect();
                    bouquet(&parts, basepoints).map_err(|e| err(&e))?
                }
            };
            built.insert(&step.id, model);
        }
        Ok(built.remove(self.output.as_str()).expect("validated output"))
    }

    /// Whether every block is a standard collapsible disc model and every
    /// later step attaches a flap, so the result is simply connected.
    pub fn simply_connected_by_construction(&self) -> bool {
        self.steps.iter().all(|s| match &s.op {
            Op::Standard { name, .. } => matches!(name.as_str(), "simplex" | "disc" | "nested_disc"),
            Op::AttachFlap { .. } => true,
            _ => false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_standard_step() {
        let r = parse_recipe(r#"[{"id":"x","op":"standard","name":"disc","n":2}]"#).unwrap();
        assert_eq!(r.steps[0].op, Op::Standard { name: "disc".into(), params: vec![2] });
        assert_eq!(r.evaluate().unwrap().complex.dim(), Some(2));
    }

    #[test]
    fn dangling_and_cyclic_references() {
        let e = parse_recipe(r#"[{"id":"x","op":"double","input":"y"}]"#).unwrap_err();
        assert_eq!((e.step, e.field.as_str()), (Some(0), "input"));
        assert!(e.message.contains("dangling"));
        let e =
            parse_recipe(r#"[{"id":"x","op":"double","input":"y"},{"id":"y","op":"standard","name":"disc","n":2}]"#)
                .unwrap_err();
        assert!(e.message.contains("cycle"));
    }

    #[test]
    fn unknown_op_is_located() {
        let e = parse_recipe(r#"[{"id":"x","op":"standard","name":"disc","n":2},{"id":"y","op":"glue"}]"#).unwrap_err();
        assert_eq!((e.step, e.field.as_str()), (Some(1), "op"));
        assert_eq!(e.to_string(), "step 1, field `op`: unknown step type `glue`");
    }

    #[test]
    fn evaluation_errors_carry_the_step() {
        let r =
            parse_recipe(r#"[{"id":"s","op":"standard","name":"sphere","n":2},{"id":"d","op":"double","input":"s"}]"#)
                .unwrap();
        assert_eq!(r.evaluate().unwrap_err().step, Some(1));
    }

    #[test]
    fn from_facets_without_vertex_list() {
        let r = parse_recipe(r#"[{"id":"t","op":"from_facets","facets":[[0,1,2]],"named":{"e":[[0,1]]}}]"#).unwrap();
        let m = r.evaluate().unwrap();
        assert_eq!(m.complex.f_vector(), vec![3, 3, 1]);
        assert!(m.complex.named("e").is_some());
    }

    #[test]
    fn construction_flag() {
        let disc = parse_recipe(
            r#"[{"id":"d","op":"standard","name":"nested_disc","r":1},{"id":"f","op":"attach_flap","input":"d","sigma":"ring_0"}]"#,
        )
        .unwrap();
        assert!(disc.simply_connected_by_construction());
        let torus = parse_recipe(r#"[{"id":"t","op":"standard","name":"torus_grid","a":3,"b":3}]"#).unwrap();
        assert!(!torus.simply_connected_by_construction());
    }
}
