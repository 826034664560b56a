use std::collections::BTreeMap;
use std::fmt::Write as _;

use psic_core::coloring::EdgeColoring;
use psic_core::graph::CompleteGraph;

const STYLES: [&str; 4] = ["solid", "dashed", "dotted", "bold"];

fn classes(c: &EdgeColoring) -> BTreeMap<u32, Vec<(usize, usize)>> {
    let g = CompleteGraph::new(c.order()).expect("valid coloring");
    let mut out: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (e, &col) in c.colors().iter().enumerate() {
        out.entry(col).or_default().push(g.endpoints(e));
    }
    out
}

/// Graphviz rendering, one color/style pair per chromatic class.
pub fn to_dot(c: &EdgeColoring) -> String {
    let classes = classes(c);
    let k = classes.len();
    let mut out = String::new();
    writeln!(out, "graph K{} {{", c.order()).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in 0..c.order() {
        writeln!(out, "  {v};").unwrap();
    }
    for (i, (color, edges)) in classes.iter().enumerate() {
        let hue = i as f64 / k as f64;
        let style = STYLES[(i / 8) % STYLES.len()];
        for &(u, v) in edges {
            writeln!(out, "  {u} -- {v} [color=\"{hue:.3} 0.850 0.850\", style={style}, label=\"{color}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// One line per chromatic class: `color <c> (<size>): u-v u-v ...`.
pub fn to_classes(c: &EdgeColoring) -> String {
    let classes = classes(c);
    let mut out = String::new();
    writeln!(out, "# n={} palette={} colors={}", c.order(), c.palette_size(), classes.len()).unwrap();
    for (color, edges) in &classes {
        let list: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        writeln!(out, "color {color} ({}): {}", edges.len(), list.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use psic_core::coloring::verify;
    use psic_core::fixtures;
    use std::collections::BTreeSet;

    #[test]
    fn dot_has_one_style_per_class() {
        let dot = to_dot(&fixtures::k4_complete_four());
        let styles: BTreeSet<&str> = dot
            .lines()
            .filter(|l| l.contains("--"))
            .map(|l| &l[l.find('[').unwrap()..l.find(", label").unwrap()])
            .collect();
        assert_eq!(styles.len(), 4);
        assert_eq!(dot.matches("--").count(), 6);
    }

    #[test]
    fn single_edge_dot() {
        let dot = to_dot(&EdgeColoring::new(2, 1, vec![0]).unwrap());
        assert_eq!(dot.matches("--").count(), 1);
        assert!(dot.contains("0 -- 1"));
    }

    #[test]
    fn class_listing_matches_report() {
        let c = fixtures::k4_incomplete_five();
        let listing = to_classes(&c);
        let report = verify(&c);
        for (color, size) in &report.class_sizes {
            assert!(listing.contains(&format!("color {color} ({size}):")), "{listing}");
        }
        assert_eq!(listing.lines().count(), 1 + report.class_sizes.len());
    }
}
