//! Generator ids and display strings.
//!
//! Ids follow `sim:A:p:q`, `rel:R:p1.….pk`, `alpha:A:p:q`, `equiv:A:k:p`;
//! the copies of the object generators inside arrow presentations carry a
//! suffix `@c`. The transport generators of a composable pair are `beta` and
//! `gamma`.

use crate::presentation::Generator;

pub fn copy(id: &str, c: Option<usize>) -> String {
    match c {
        Some(c) => format!("{id}@{c}"),
        None => id.to_string(),
    }
}

fn sub(c: Option<usize>) -> String {
    c.map(|c| char::from_u32(0x2080 + c as u32).unwrap().to_string()).unwrap_or_default()
}

fn join(ps: &[usize]) -> String {
    ps.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
}

pub fn sim(sort: &str, p: usize, q: usize) -> String {
    format!("sim:{sort}:{p}:{q}")
}

pub fn rel(name: &str, ps: &[usize]) -> String {
    format!("rel:{name}:{}", join(ps))
}

pub fn transport(kind: &str, sort: &str, p: usize, q: usize) -> String {
    format!("{kind}:{sort}:{p}:{q}")
}

pub fn alpha(sort: &str, p: usize, q: usize) -> String {
    transport("alpha", sort, p, q)
}

pub fn equiv(sort: &str, k: usize, p: usize) -> String {
    format!("equiv:{sort}:{k}:{p}")
}

fn with_copy(g: Generator, c: Option<usize>) -> Generator {
    match c {
        Some(c) => g.tagged("copy", c.to_string()),
        None => g,
    }
}

pub(crate) fn sim_gen(sort: &str, p: usize, q: usize, c: Option<usize>) -> Generator {
    let g = Generator::new(copy(&sim(sort, p, q), c), format!("[{p} ∼{sort}{} {q}]", sub(c)))
        .tagged("kind", "sim")
        .tagged("symbol", sort)
        .tagged("args", format!("{p},{q}"));
    with_copy(g, c)
}

pub(crate) fn rel_gen(name: &str, ps: &[usize], c: Option<usize>) -> Generator {
    let args = ps.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let g = Generator::new(copy(&rel(name, ps), c), format!("[({args}) ∈ {name}{}]", sub(c)))
        .tagged("kind", "rel")
        .tagged("symbol", name)
        .tagged("args", args);
    with_copy(g, c)
}

pub(crate) fn transport_gen(kind: &str, sort: &str, p: usize, q: usize) -> Generator {
    let letter = match kind {
        "alpha" => "α",
        "beta" => "β",
        "gamma" => "γ",
        other => other,
    };
    Generator::new(transport(kind, sort, p, q), format!("[{letter}{sort}({p}) = {q}]"))
        .tagged("kind", kind)
        .tagged("symbol", sort)
        .tagged("args", format!("{p},{q}"))
}

/// Template with a `{k}` placeholder for the copy index.
pub(crate) fn equiv_template(sort: &str, p: usize) -> Generator {
    Generator::new(format!("equiv:{sort}:{{k}}:{p}"), format!("[≡{{k}}{sort} {p}]"))
        .tagged("kind", "equiv")
        .tagged("symbol", sort)
        .tagged("args", p.to_string())
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |p| {
                    let mut t = t.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_scheme() {
        assert_eq!(sim("X", 0, 1), "sim:X:0:1");
        assert_eq!(rel("E", &[1, 0]), "rel:E:1.0");
        assert_eq!(copy(&alpha("X", 0, 1), None), "alpha:X:0:1");
        assert_eq!(copy(&sim("X", 0, 0), Some(2)), "sim:X:0:0@2");
        assert_eq!(equiv("X", 1, 0), "equiv:X:1:0");
        assert_eq!(sim_gen("X", 0, 1, Some(1)).display, "[0 ∼X₁ 1]");
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(tuples(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(tuples(0, 0), vec![Vec::<usize>::new()]);
        assert!(tuples(0, 1).is_empty());
    }
}
