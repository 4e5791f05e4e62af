//! DOT and JSON renderings of the quiver.

use std::fmt::Write;

use serde_json::{json, Value};

use super::input::matrix_value;
use crate::exactla::Field;
use crate::unfam::{ArQuiver, IndecLabel};

/// How vertex names are written: level-`n` labels, or the infinite-chain
/// labels `Lhat…` for the extended members.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Naming {
    Finite,
    Extended,
}

pub fn vertex_name(l: IndecLabel, naming: Naming) -> String {
    match (naming, l) {
        (Naming::Extended, IndecLabel::L1(i)) => format!("Lhat1_{i}"),
        (Naming::Extended, IndecLabel::L2(i)) => format!("Lhat2_{i}"),
        (Naming::Extended, IndecLabel::L3(i)) => format!("Lhat3_{i}"),
        _ => l.node_id(),
    }
}

/// The part of a quiver to draw.
pub struct QuiverView<'a, F: Field> {
    pub quiver: &'a ArQuiver<F>,
    pub naming: Naming,
    /// Sequences whose left end is `S` are left out.
    pub drop_trivial_left: bool,
}

impl<F: Field> QuiverView<'_, F> {
    fn sequences(&self) -> impl Iterator<Item = &crate::unfam::AlmostSplit<F>> {
        self.quiver
            .sequences
            .iter()
            .filter(move |s| !(self.drop_trivial_left && s.x == IndecLabel::S))
    }

    fn arrows(&self) -> Vec<(IndecLabel, IndecLabel)> {
        let mut a: Vec<_> = self.sequences().flat_map(|s| [(s.x, s.y), (s.y, s.z)]).collect();
        a.sort();
        a.dedup();
        a
    }

    fn tau(&self) -> Vec<(IndecLabel, IndecLabel)> {
        let mut t: Vec<_> = self.sequences().map(|s| (s.z, s.x)).collect();
        t.sort();
        t
    }
}

pub fn emit_dot<F: Field>(view: &QuiverView<'_, F>) -> String {
    let name = |l| vertex_name(l, view.naming);
    let mut out = String::from("digraph ar_quiver {\n");
    for &v in &view.quiver.vertices {
        writeln!(out, "  {};", name(v)).unwrap();
    }
    for (a, b) in view.arrows() {
        writeln!(out, "  {} -> {};", name(a), name(b)).unwrap();
    }
    for (z, x) in view.tau() {
        writeln!(out, "  {} -> {} [style=dashed, dir=none];", name(z), name(x)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn emit_json<F: Field>(view: &QuiverView<'_, F>) -> String {
    let name = |l| vertex_name(l, view.naming);
    let names = |ls: &[IndecLabel]| ls.iter().map(|&l| Value::from(name(l))).collect::<Vec<_>>();
    let pairs = |ps: Vec<(IndecLabel, IndecLabel)>| ps.into_iter().map(|(a, b)| json!([name(a), name(b)])).collect::<Vec<_>>();
    let seqs: Vec<Value> = view
        .sequences()
        .map(|s| {
            json!({
                "x": name(s.x),
                "y": name(s.y),
                "z": name(s.z),
                "u": matrix_value(s.seq.u.matrix()),
                "v": matrix_value(s.seq.v.matrix()),
            })
        })
        .collect();
    let doc = json!({
        "n": view.quiver.n,
        "vertices": names(&view.quiver.vertices),
        "arrows": pairs(view.arrows()),
        "tau": pairs(view.tau()),
        "projectives": names(&view.quiver.projectives),
        "injectives": names(&view.quiver.injectives),
        "sequences": seqs,
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}
