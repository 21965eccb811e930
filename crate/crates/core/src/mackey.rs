//! The named Mackey functors, their level groups at truncation `N`, and
//! recognition of computed functors.

use alloc::string::String;
use alloc::vec::Vec;

use crate::abgroup::AbGroup;
use crate::{Error, Result};

/// `(name, [top, middle, bottom])` with levels written as tokens joined
/// by `" + "`.
pub const DICTIONARY: &[(&str, [&str; 3])] = &[
    // modules without μ
    ("square", ["W", "W", "W"]),
    ("hat-square", ["W", "W[C4/C2]", "W[C4/C2]"]),
    ("bar-square", ["0", "W-", "W-"]),
    ("mdwhtcircle", ["W/4", "k", "0"]),
    ("mdblkcircle", ["k", "0", "0"]),
    ("bar-mdblkcircle", ["0", "k", "0"]),
    ("blacktriangledown", ["k", "k", "0"]),
    ("blacktriangle", ["k", "k", "0"]),
    ("blackhourglass", ["k", "k", "W[C4/C2]-"]),
    ("squarellblack", ["W", "W", "W"]),
    ("hat-bar-square", ["0", "0", "W[C4/C2]-"]),
    ("hat-dot-square", ["k", "k[C4/C2]", "W[C4/C2]-"]),
    ("bar-squarellblack", ["0", "W-", "W-"]),
    ("hat-squarellblack", ["W", "W[C4/C2]", "W[C4/C2]"]),
    ("squaretopblack", ["W", "W", "W"]),
    ("hat-mdblkcircle", ["k", "k[C4/C2]", "0"]),
    // W[[μ]]-linear versions
    ("u-hat-square", ["Wmu", "A", "A"]),
    ("u-hat-bar-square", ["0", "0", "A-"]),
    ("hat-u-boxdot", ["Wmu", "A(+)", "A(+)"]),
    ("u-tilde-boxdot", ["Wmu", "A(-)", "A(-)"]),
    ("u-tilde-squarellblack", ["Wmu", "A(-)", "A(-)"]),
    ("u-hat-mdblkcircle", ["kmu", "A/2", "0"]),
    ("u-hat-odot", ["Wmu/(4,2mu)", "A(+)/2", "0"]),
    ("u-tilde-mdblkcircle", ["kmu", "A(-)/2", "0"]),
    ("u-hat-squarellblack", ["Wmu", "A", "A"]),
    ("u-hat-blackinwhitesquare", ["(4,mu)Wmu", "(2*,e,g)A(+)", "A(+)"]),
    ("u-hat-boxbox", ["(2,mu)Wmu", "A(+)", "A(+)"]),
    ("u-hat-circledwhitebullet", ["(2,mu)Wmu/(4,2mu)", "A(+)/2", "0"]),
    ("u-hat-blacktriangle", ["kmu", "A(+)/2", "0"]),
    ("u-hat-squarebotblack", ["(2,mu)Wmu", "A(+)", "A(+)"]),
    ("u-hat-squaretopblack", ["Wmu", "A(+)", "A(+)"]),
    ("u-tilde-boxbox", ["Wmu", "(2*,e,g)A(-)", "A(-)"]),
    // functors with a nonzero bottom in positive filtration
    ("u-check-boxcircle", ["(2,mu)Wmu/(4,2mu)", "A(+)/2", "A-"]),
    ("u-check-squarellblack", ["k + Wmu", "k + A(-)", "A(-)"]),
    ("u-tilde-dot-square", ["kmu", "A(-)/2", "A-"]),
    ("u-hat-bar-blackhourglass", ["k", "k", "A-"]),
    ("u-hat-bar-boxcircle", ["W/4", "k", "A-"]),
    ("u-tilde-dot-squarellblack", ["k + Wmu", "A(-)", "A(-)"]),
    ("u-tilde-dot-boxdot", ["k + Wmu", "A(-)", "A(-)"]),
    ("u-check-boxdot", ["Wmu/(4,2mu)", "A(+)/2", "A-"]),
    ("u-hat-bar-inversebullet", ["0", "k", "A-"]),
    ("breve-bar-squarellblack", ["Wmu", "k + A(+)", "A(+)"]),
    ("u-tilde-dot-boxbox", ["k + Wmu", "(2*,e,g)A(-)", "A(-)"]),
    ("u-hat-dot-square", ["kmu", "A/2", "A-"]),
    ("u-hat-ring-squarellblack", ["W/4 + Wmu", "k + A(-)", "A(-)"]),
    ("u-check-squaretopblack", ["k + Wmu", "k + A(+)", "A(+)"]),
];

/// Group of one token at truncation `n`.
pub fn token_group(token: &str, n: usize) -> Result<AbGroup> {
    let twos = |k: usize| AbGroup::from_parts(0, &alloc::vec![2; k]);
    let g = match token {
        "0" => AbGroup::zero(),
        "W" | "W-" => AbGroup::free(1),
        "W[C4/C2]" | "W[C4/C2]-" => AbGroup::free(2),
        "W/4" => AbGroup::cyclic(4),
        "k" => AbGroup::cyclic(2),
        "k[C4/C2]" => twos(2),
        "Wmu" => AbGroup::free(n),
        "A" | "A(+)" | "A(-)" | "A-" => AbGroup::free(2 * n),
        "(2,mu)Wmu" => AbGroup::from_parts(n, &[2]),
        "(4,mu)Wmu" => AbGroup::from_parts(n, &[4]),
        "(2*,e,g)A(+)" | "(2*,e,g)A(-)" => AbGroup::from_parts(2 * n, &[2]),
        "Wmu/(4,2mu)" => AbGroup::cyclic(4).direct_sum(&twos(n - 1)),
        "(2,mu)Wmu/(4,2mu)" => twos(n + 1),
        "kmu" => twos(n),
        "A/2" | "A(+)/2" | "A(-)/2" => twos(2 * n),
        other => return Err(Error::UnknownModule(String::from(other))),
    };
    Ok(g)
}

pub fn level_group(level: &str, n: usize) -> Result<AbGroup> {
    let mut acc = AbGroup::zero();
    for tok in split_sum(level) {
        acc = acc.direct_sum(&token_group(tok, n)?);
    }
    Ok(acc)
}

pub fn lookup(name: &str) -> Option<&'static [&'static str; 3]> {
    DICTIONARY.iter().find(|(n, _)| *n == name).map(|(_, l)| l)
}

/// Levels of a named functor, or of a `+`-separated sum of names, at `n`.
pub fn evaluate(expr: &str, n: usize) -> Result<[AbGroup; 3]> {
    let mut out = [AbGroup::zero(), AbGroup::zero(), AbGroup::zero()];
    for name in split_sum(expr) {
        if name == "0" {
            continue;
        }
        let levels = lookup(name).ok_or_else(|| Error::UnknownModule(String::from(name)))?;
        for (o, l) in out.iter_mut().zip(levels.iter()) {
            *o = o.direct_sum(&level_group(l, n)?);
        }
    }
    Ok(out)
}

/// Summands of a direct sum of names.
pub fn split_sum(expr: &str) -> Vec<&str> {
    expr.split(" + ").map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// First dictionary name whose levels agree with `levels` at `n`, among
/// `candidates` if given. Several entries share level groups and differ
/// only in structure maps, so candidates disambiguate.
pub fn recognize(levels: &[AbGroup; 3], n: usize, candidates: Option<&[&str]>) -> String {
    if levels.iter().all(AbGroup::is_zero) {
        return String::from("0");
    }
    for (name, _) in DICTIONARY {
        if let Some(c) = candidates {
            if !c.contains(name) {
                continue;
            }
        }
        if evaluate(name, n).map(|l| &l == levels).unwrap_or(false) {
            return String::from(*name);
        }
    }
    String::from("unknown")
}

/// Closed forms for `H^s(C4, M)` of the dictionary modules.
pub fn closed_form(module: &str, s: usize) -> Result<&'static str> {
    let (zero, even, odd) = match module {
        "W" => ("square", "mdwhtcircle", "0"),
        "W[C4/C2]" => ("hat-square", "hat-mdblkcircle", "0"),
        "W-" => ("bar-square", "bar-mdblkcircle", "mdblkcircle"),
        "W[C4/C2]-" => ("hat-bar-square", "0", "hat-mdblkcircle"),
        "A(+)" => ("hat-u-boxdot", "u-hat-odot", "0"),
        "A" => ("u-hat-square", "u-hat-mdblkcircle", "0"),
        "A(-)" => ("u-tilde-boxdot", "u-tilde-mdblkcircle", "mdblkcircle"),
        // fixed points of A- vanish at the top, so the degree zero value
        // is the barred functor
        "A-" => ("u-hat-bar-square", "0", "u-hat-mdblkcircle"),
        other => return Err(Error::UnknownModule(String::from(other))),
    };
    Ok(if s == 0 {
        zero
    } else if s % 2 == 0 {
        even
    } else {
        odd
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_at_n() {
        let n = 6;
        assert_eq!(level_group("Wmu/(4,2mu)", n).unwrap(), AbGroup::from_parts(0, &[4, 2, 2, 2, 2, 2]));
        assert_eq!(level_group("k + A(+)", n).unwrap(), AbGroup::from_parts(12, &[2]));
        assert_eq!(level_group("(2*,e,g)A(+)", n).unwrap(), AbGroup::from_parts(12, &[2]));
        assert_eq!(level_group("A(+)/2", n).unwrap(), AbGroup::from_parts(0, &[2; 12]));
        assert!(level_group("B", n).is_err());
        for (name, _) in DICTIONARY {
            evaluate(name, n).unwrap();
        }
    }

    #[test]
    fn recognition() {
        let l = evaluate("mdwhtcircle", 6).unwrap();
        assert_eq!(recognize(&l, 6, None), "mdwhtcircle");
        let l = [AbGroup::cyclic(2), AbGroup::zero(), AbGroup::zero()];
        assert_eq!(recognize(&l, 6, None), "mdblkcircle");
        let z = [AbGroup::zero(), AbGroup::zero(), AbGroup::zero()];
        assert_eq!(recognize(&z, 6, None), "0");
        let sum = evaluate("u-hat-mdblkcircle + mdblkcircle", 6).unwrap();
        assert_eq!(sum[0], AbGroup::from_parts(0, &[2; 7]));
    }
}
