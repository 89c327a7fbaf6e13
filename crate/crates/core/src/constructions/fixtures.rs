//! Labelled complexes transcribed from the figures.

use serde::Serialize;

use super::{elongated_pyramid, polygon_complex, pyramid, subdivided_polygon, wheel_polytope, ConstructionError};
use crate::complex::CellComplex;
use crate::monomial::{polarize, Monomial, MonomialLabelling};

/// A labelled complex with human-readable variable names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fixture {
    pub id: String,
    pub description: String,
    pub variables: Vec<String>,
    pub complex: CellComplex,
    pub labelling: MonomialLabelling,
}

/// Catalogue of fixture ids with one-line descriptions.
pub const CATALOGUE: &[(&str, &str)] = &[
    ("3.1", "hexagon with chords xy-xz and xz-yz, labels x^2, xy, y^2, yz, z^2, xz"),
    ("3.2", "polarization of 3.1"),
    ("3.3", "second polarization of 3.1"),
    ("3.4", "eight-variable refinement of 3.2 and 3.3"),
    ("4.1", "pyramid over the pentagon, labels x_i x_{i+1} and apex x5 x6"),
    ("4.2", "elongated pyramid over a triangle"),
    ("4.4", "wheel polytope n=4, first labelling"),
    ("4.6", "wheel polytope n=4, stellar subdivision of faces 124 and 235"),
    ("4.7", "wheel polytope n=4, third labelling"),
    ("4.8", "wheel polytope n=4, fourth labelling"),
];

/// The two-chord hexagon: vertex order x^2, xy, y^2, yz, z^2, xz.
pub fn hexagon_two_chords() -> CellComplex {
    subdivided_polygon(6, &[(1, 5), (3, 5)]).expect("valid chords")
}

fn named(vars: &[&str], labels: &[&[&str]]) -> MonomialLabelling {
    let r = vars.len();
    let ms = labels
        .iter()
        .map(|l| {
            let mut m = Monomial::one(r);
            for name in *l {
                let p = vars.iter().position(|v| v == name).unwrap_or_else(|| panic!("unknown variable {name}"));
                m.0[p] += 1;
            }
            m
        })
        .collect();
    MonomialLabelling::new(r, ms).expect("fixture labels are valid")
}

/// Labels written as digit strings over variables `1..=r`.
fn digits(labels: &[&str]) -> (Vec<String>, MonomialLabelling) {
    let r = labels.iter().flat_map(|l| l.chars()).map(|c| c.to_digit(10).expect("digit") as usize).max().unwrap_or(0);
    let vars: Vec<String> = (1..=r).map(|p| p.to_string()).collect();
    let ms = labels.iter().map(|l| Monomial::from_support(r, l.chars().map(|c| c.to_digit(10).unwrap() as usize - 1))).collect();
    (vars, MonomialLabelling::new(r, ms).expect("fixture labels are valid"))
}

pub fn figure_fixture(id: &str) -> Result<Fixture, ConstructionError> {
    let description = CATALOGUE
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, d)| d.to_string())
        .ok_or_else(|| ConstructionError::UnknownFixture(id.to_string()))?;
    let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let (variables, complex, labelling) = match id {
        "3.1" => {
            let vars = ["x", "y", "z"];
            let l = named(&vars, &[&["x", "x"], &["x", "y"], &["y", "y"], &["y", "z"], &["z", "z"], &["x", "z"]]);
            (own(&vars), hexagon_two_chords(), l)
        }
        "3.2" => {
            let base = figure_fixture("3.1")?;
            (own(&["x1", "x2", "y1", "y2", "z1", "z2"]), base.complex, polarize(&base.labelling))
        }
        "3.3" => {
            let vars = ["x1", "x2", "y'1", "y'2", "z1", "z2"];
            let l = named(
                &vars,
                &[&["x1", "x2"], &["x1", "y'2"], &["y'1", "y'2"], &["y'1", "z2"], &["z1", "z2"], &["x1", "z2"]],
            );
            (own(&vars), hexagon_two_chords(), l)
        }
        "3.4" => {
            let vars = ["x1", "x2", "y1", "y2", "y'1", "y'2", "z", "z'"];
            let l = named(
                &vars,
                &[
                    &["x1", "x2"],
                    &["x1", "y1", "y'2"],
                    &["y1", "y2", "y'1", "y'2"],
                    &["y1", "y'1", "z"],
                    &["z", "z'"],
                    &["x1", "z"],
                ],
            );
            (own(&vars), hexagon_two_chords(), l)
        }
        "4.1" => {
            let (vars, l) = digits(&["12", "23", "34", "45", "51", "67"]);
            (vars, pyramid(&polygon_complex(5)?)?, l)
        }
        "4.2" => {
            // (v,0) = v, (v,1) = 3 + v, apex 6
            let (vars, l) = digits(&["47", "57", "67", "14", "25", "36", "123"]);
            (vars, elongated_pyramid(&polygon_complex(3)?)?, l)
        }
        "4.4" | "4.6" | "4.7" | "4.8" => {
            // rim v0..v7, then the centre
            let labels: [&str; 9] = match id {
                "4.4" => ["25", "35", "15", "13", "14", "46", "24", "26", "36"],
                "4.6" => ["45", "124", "47", "17", "67", "36", "56", "235", "123"],
                "4.7" => ["45", "234", "124", "123", "17", "67", "57", "56", "36"],
                _ => ["47", "124", "45", "125", "56", "36", "67", "37", "123"],
            };
            let (vars, l) = digits(&labels);
            (vars, wheel_polytope(4)?, l)
        }
        _ => unreachable!("catalogue and match agree"),
    };
    Ok(Fixture { id: id.to_string(), description, variables, complex, labelling })
}

/// Every catalogued fixture, in catalogue order.
pub fn all_fixtures() -> Vec<Fixture> {
    CATALOGUE.iter().map(|(id, _)| figure_fixture(id).expect("catalogued")).collect()
}
