use pmapkit::blueprint::{FiniteGraph, GraphBlueprint as B};
use pmapkit::classify::{classify_blueprint, Asdim, CbVerdict, H1Bound, LocallyCbVerdict, MapCbNote};

pub fn fin(vertices: u32, edges: Vec<(u32, u32)>, rays: Vec<u32>) -> B {
    B::Finite(FiniteGraph::new(vertices, edges, rays))
}

pub struct Row {
    pub name: &'static str,
    pub graph: B,
    pub cb: (CbVerdict, &'static str),
    pub loc: (LocallyCbVerdict, &'static str),
    pub asdim: Asdim,
    pub h1: H1Bound,
    pub map: MapCbNote,
}

pub fn table() -> Vec<Row> {
    use Asdim::*;
    use CbVerdict::*;
    use LocallyCbVerdict::*;
    use MapCbNote::*;
    let comb_ray = || B::comb(B::ray());
    vec![
        Row { name: "loch ness", graph: B::LochNess, cb: (CB, "el-one-discrete"), loc: (LocallyCB, "finite-components"), asdim: Zero, h1: H1Bound::Rank(0), map: MapCB },
        Row { name: "hungry 2", graph: B::Hungry(2), cb: (CB, "el-one-discrete"), loc: (LocallyCB, "finite-components"), asdim: Zero, h1: H1Bound::Rank(0), map: MapCB },
        Row { name: "hungry 3", graph: B::Hungry(3), cb: (CB, "el-one-discrete"), loc: (LocallyCB, "finite-components"), asdim: Zero, h1: H1Bound::Rank(0), map: MapCB },
        Row { name: "millipede", graph: B::Millipede, cb: (CB, "el-one-discrete"), loc: (LocallyCB, "finite-components"), asdim: Zero, h1: H1Bound::Rank(0), map: MapCB },
        Row { name: "lasso", graph: B::lasso(), cb: (CB, "lasso"), loc: (LocallyCB, "finite-rank"), asdim: DiscreteCase, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "loop with two rays", graph: fin(1, vec![(0, 0)], vec![0, 0]), cb: (NotCB, "rank1-multi-end"), loc: (LocallyCB, "finite-rank"), asdim: DiscreteCase, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "rank three with two rays", graph: fin(1, vec![(0, 0), (0, 0), (0, 0)], vec![0, 0]), cb: (NotCB, "finite-rank≥2"), loc: (LocallyCB, "finite-rank"), asdim: DiscreteCase, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "rose of rank two", graph: fin(1, vec![(0, 0), (0, 0)], vec![]), cb: (NotCB, "finite-rank≥2"), loc: (LocallyCB, "finite-rank"), asdim: DiscreteCase, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "ladder", graph: B::Ladder, cb: (NotCB, "two-ends-accumulated"), loc: (LocallyCB, "finite-components"), asdim: Infinite, h1: H1Bound::Rank(1), map: MapNotCB },
        Row { name: "comb of rays on loch ness", graph: B::wedge(B::LochNess, comb_ray(), ("root", "root")), cb: (NotCB, "accumulation-point"), loc: (LocallyCB, "finite-components"), asdim: Zero, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "two combs on loch ness", graph: B::wedge(B::wedge(B::LochNess, comb_ray(), ("root", "root")), comb_ray(), ("v3", "root")), cb: (NotCB, "accumulation-point"), loc: (LocallyCB, "finite-components"), asdim: Zero, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "tree spray of ladders", graph: B::spray(Some(B::Ladder)), cb: (NotCB, "two-ends-accumulated"), loc: (NotLocallyCB, "infinite-el"), asdim: NotDefined, h1: H1Bound::DIRECT_SUM, map: Unknown },
        Row { name: "ray", graph: B::ray(), cb: (CB, "rank-0"), loc: (LocallyCB, "finite-rank"), asdim: DiscreteCase, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "binary tree", graph: B::spray(None), cb: (CB, "rank-0"), loc: (LocallyCB, "finite-rank"), asdim: DiscreteCase, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "comb of loch ness", graph: B::comb(B::LochNess), cb: (NotCB, "two-ends-accumulated"), loc: (NotLocallyCB, "infinite-el"), asdim: NotDefined, h1: H1Bound::DIRECT_SUM, map: Unknown },
        Row { name: "comb of lollipops with combs", graph: B::comb(B::wedge(fin(1, vec![(0, 0)], vec![]), comb_ray(), ("root", "root"))), cb: (NotCB, "accumulation-point"), loc: (NotLocallyCB, "infinite-components"), asdim: NotDefined, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "binary tree on loch ness", graph: B::wedge(B::LochNess, B::spray(None), ("root", "root")), cb: (NotCB, "accumulation-point"), loc: (LocallyCB, "finite-components"), asdim: Zero, h1: H1Bound::Rank(0), map: Unknown },
        Row { name: "ladder with a comb", graph: B::wedge(B::Ladder, comb_ray(), ("root", "root")), cb: (NotCB, "two-ends-accumulated"), loc: (LocallyCB, "finite-components"), asdim: Infinite, h1: H1Bound::Rank(1), map: Unknown },
    ]
}

/// Checks one row, naming the first mismatch.
pub fn check_row(row: &Row) -> Result<(), String> {
    let r = classify_blueprint(&row.graph).map_err(|e| format!("{}: {e}", row.name))?;
    let got = (
        (r.cb_verdict, r.cb_reason.tag.as_str()),
        (r.locally_cb_verdict, r.loc_cb_reason.tag.as_str()),
        r.asdim,
        r.h1_lower_bound,
        r.map_cb_note,
    );
    let want = (row.cb, row.loc, row.asdim, row.h1, row.map);
    if got == want {
        Ok(())
    } else {
        Err(format!("{}: got {got:?}, expected {want:?}", row.name))
    }
}
