use std::collections::BTreeMap;

use serde_json::json;

use wittkit::lattice::{enumerate_lattices, hom_dimension, specialization_chain};
use wittkit::ore::{admissible_types, count_ore_lattices, orbit_dimension, OreRing};
use wittkit::witt::GaloisRing;
use wittkit::Error;

use crate::cli::Common;
use crate::commands::{field, CmdResult};
use crate::report::Report;

const POINT_CAP: u64 = 1 << 20;

fn key(ty: &[u32]) -> String {
    ty.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn atlas(c: &Common) -> CmdResult {
    let gf = field(c)?;
    let (n, r) = (c.n, c.r);
    let nr = n * r;
    let variety_dim = n * (n - 1) * r;
    let mut rep = Report::new("atlas");
    rep.input("p", c.p).input("m", c.m).input("n", n).input("r", r);

    let types = admissible_types(n, nr, nr);
    let top: Vec<u32> = {
        let mut t = vec![0; n];
        t[0] = nr as u32;
        t
    };

    let mut wcounts: Option<BTreeMap<Vec<u32>, u64>> = None;
    match enumerate_lattices(&GaloisRing::new(&gf, nr as u32)?, n, nr as u32) {
        Ok(lats) => {
            let mut m = BTreeMap::new();
            for l in lats {
                *m.entry(l.ty).or_insert(0) += 1;
            }
            wcounts = Some(m);
        }
        Err(Error::SizeGuard(msg)) => {
            rep.line(format!("point counts skipped: {msg}"));
        }
        Err(e) => return Err(e.into()),
    }
    let ocounts = match count_ore_lattices(&OreRing::new(&gf, nr), n, nr, POINT_CAP) {
        Ok(m) => Some(m),
        Err(Error::SizeGuard(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut rows = Vec::new();
    let mut smooth_ok = true;
    let mut counts_agree = true;
    rep.line(format!("{:<12} {:>6} {:>8} {:>7} {:>8}", "type", "orbit", "tangent", "smooth", "points"));
    for ty in &types {
        let t32: Vec<u32> = ty.iter().map(|&x| x as u32).collect();
        let orbit = orbit_dimension(ty, n, r)?;
        let tangent = hom_dimension(&gf, &t32, nr as u32)?;
        let smooth = tangent == variety_dim;
        smooth_ok &= smooth == (t32 == top);
        let points = wcounts.as_ref().map(|m| m.get(&t32).copied().unwrap_or(0));
        if let (Some(w), Some(o)) = (points, ocounts.as_ref()) {
            counts_agree &= w == o.get(ty).copied().unwrap_or(0);
        }
        rep.line(format!(
            "{:<12} {:>6} {:>8} {:>7} {:>8}",
            key(&t32),
            orbit,
            tangent,
            smooth,
            points.map_or("-".to_string(), |x| x.to_string())
        ));
        rows.push(json!({ "type": t32, "orbit_dim": orbit, "tangent_dim": tangent, "smooth": smooth, "points": points }));
    }

    let gr1 = GaloisRing::new(&gf, nr as u32 + 1)?;
    let (_, edges) = specialization_chain(&gr1, n, nr as u32)?;
    let mut dot = String::from("digraph specializations {\n");
    for e in &edges {
        dot.push_str(&format!("  \"{}\" -> \"{}\";\n", key(&e.from), key(&e.to)));
    }
    dot.push_str("}\n");

    rep.output("variety_dim", variety_dim).output("types", rows);
    rep.output(
        "edges",
        edges.iter().map(|e| json!({ "from": e.from, "to": e.to, "verified": e.verified })).collect::<Vec<_>>(),
    );
    rep.output("dot", &dot);
    if let Some(dir) = &c.out {
        let path = dir.with_extension("dot");
        std::fs::write(&path, &dot).map_err(|e| Error::DomainError(format!("{}: {e}", path.display())))?;
    }

    let top_orbit = orbit_dimension(&types[0], n, r)?;
    rep.check("top orbit is dense", top_orbit == variety_dim, format!("{top_orbit} vs {variety_dim}"));
    rep.check("only the top type is smooth", smooth_ok, "");
    rep.check("specialization fibers", edges.iter().all(|e| e.verified), format!("{} edges", edges.len()));
    if wcounts.is_some() && ocounts.is_some() {
        rep.check("Witt and Ore point counts agree", counts_agree, "");
    }
    Ok(rep)
}
