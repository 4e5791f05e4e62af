//! Browser bindings: the quiver, the Hom table and a seeded random
//! decomposition of the chain family, each returned as JSON text.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use posinv::cli::emit::{emit_json, Naming, QuiverView};
use posinv::exactla::PrimeField;
use posinv::rep::Rep;
use posinv::unfam::{ar_quiver, decompose_with, UnFamily};

const MAX_N: usize = 8;

fn field() -> PrimeField {
    PrimeField::new(101).expect("101 is prime")
}

fn family(n: usize) -> Result<UnFamily<PrimeField>, String> {
    if !(1..=MAX_N).contains(&n) {
        return Err(format!("n must be between 1 and {MAX_N}"));
    }
    UnFamily::new(n, field()).map_err(|e| e.to_string())
}

pub fn quiver_json(n: usize) -> Result<String, String> {
    let fam = family(n)?;
    let q = ar_quiver(&fam).map_err(|e| e.to_string())?;
    Ok(emit_json(&QuiverView { quiver: &q, naming: Naming::Finite, drop_trivial_left: false }))
}

pub fn hom_table_json(n: usize) -> Result<String, String> {
    let fam = family(n)?;
    let t = fam.hom_table();
    let labels: Vec<String> = t.labels.iter().map(|l| l.to_string()).collect();
    Ok(json!({ "labels": labels, "dims": t.dims }).to_string())
}

pub fn decompose_json(n: usize, d0: usize, seed: u64) -> Result<String, String> {
    if d0 > 12 {
        return Err("d0 must be at most 12".into());
    }
    let fam = family(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = Rep::random(fam.poset().clone(), field(), d0, &mut rng);
    let d = decompose_with(&v, Some(&fam), &mut rng);
    let oracle = fam.multiplicities(&v).map_err(|e| e.to_string())?;
    let count = |m: &[(posinv::unfam::IndecLabel, usize)]| -> Value {
        m.iter().map(|(l, k)| (l.to_string(), Value::from(*k))).collect::<serde_json::Map<_, _>>().into()
    };
    let summands = match d.labels() {
        Some(ls) => count(&ls),
        None => d.multiset().into_iter().map(|(s, k)| (s, Value::from(k))).collect::<serde_json::Map<_, _>>().into(),
    };
    Ok(json!({
        "n": n,
        "d0": d0,
        "seed": seed,
        "class_dims": v.class_dims(),
        "summands": summands,
        "certified": d.certified,
        "oracle": count(&oracle),
        "agrees": d.labels().as_deref() == Some(oracle.as_slice()),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn ar_quiver_json(n: usize) -> Result<String, JsError> {
    quiver_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn hom_table(n: usize) -> Result<String, JsError> {
    hom_table_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn decompose_random(n: usize, d0: usize, seed: u32) -> Result<String, JsError> {
    decompose_json(n, d0, seed as u64).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiver_for_one() {
        let v: Value = serde_json::from_str(&quiver_json(1).unwrap()).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(v["arrows"].as_array().unwrap().len(), 4);
        assert!(quiver_json(0).is_err());
    }

    #[test]
    fn hom_table_shape() {
        let v: Value = serde_json::from_str(&hom_table_json(2).unwrap()).unwrap();
        assert_eq!(v["labels"].as_array().unwrap().len(), 7);
        assert_eq!(v["dims"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn decomposition_is_seeded_and_agrees() {
        let a = decompose_json(2, 4, 5).unwrap();
        assert_eq!(a, decompose_json(2, 4, 5).unwrap());
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["agrees"], Value::Bool(true));
        assert_eq!(v["certified"], Value::Bool(true));
    }
}
