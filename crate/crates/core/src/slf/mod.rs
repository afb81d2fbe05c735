//! Separating linear forms by divide and conquer over the variables.
//!
//! Leaves eliminate along the coordinates. An internal node over the block
//! `I u J` combines its children as `l_I + s l_J`, with `s` taken from a
//! separating block for the grid `V(E^{l_I}) x V(E^{l_J})`, and eliminates
//! along the result. A tree over `n` variables makes `2n - 1` oracle calls.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::elim::{
    check_no_infinity, choose_shear, EliminationOracle, EliminationResult, FormFamily,
    LinearForm, Strongness,
};
use crate::error::{Error, Result};
use crate::grid::{find_separating_block, SeparatingInterval};
use crate::poly::PolynomialSystem;
use crate::roots::{isolate, RootSet};

/// Quality of the initial isolation of node root sets.
const INITIAL_QUALITY: u32 = 4;

#[derive(Clone, Debug)]
pub struct SlfNode {
    /// Variables covered by this node.
    pub block: Range<usize>,
    pub form: LinearForm,
    /// Combining integer; `None` at leaves.
    pub s: Option<BigInt>,
    pub children: Option<(usize, usize)>,
    /// Separating block the combining integer came from.
    pub grid: Option<SeparatingInterval>,
    pub result: Option<EliminationResult>,
    /// Roots of the squarefree part of the elimination polynomial.
    pub roots: Option<RootSet>,
}

#[derive(Clone, Debug)]
pub struct SlfTree {
    pub nodes: Vec<SlfNode>,
    pub root: usize,
    pub oracle_calls: u64,
}

impl SlfTree {
    pub fn root_node(&self) -> &SlfNode {
        &self.nodes[self.root]
    }

    pub fn root_form(&self) -> &LinearForm {
        &self.root_node().form
    }

    /// `l = l_left + s l_right` at every internal node, exactly.
    pub fn check_recursion(&self) -> bool {
        self.nodes.iter().all(|node| match (node.children, &node.s) {
            (Some((a, b)), Some(s)) => {
                let (la, lb) = (&self.nodes[a].form, &self.nodes[b].form);
                node.form
                    .coeffs()
                    .iter()
                    .zip(la.coeffs().iter().zip(lb.coeffs()))
                    .all(|(c, (x, y))| *c == x + s * y)
                    && node.form.pivot() == la.pivot()
            }
            (None, None) => true,
            _ => false,
        })
    }

    /// Largest absolute coefficient of any stored form.
    pub fn max_coefficient(&self) -> BigInt {
        self.nodes
            .iter()
            .flat_map(|n| n.form.coeffs().iter().map(|c| c.magnitude().clone().into()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// `prod` over the levels of the search-range bounds met along the
    /// deepest path: a run-time bound on every root coefficient.
    pub fn range_bound(&self) -> BigInt {
        fn walk(t: &SlfTree, i: usize) -> BigInt {
            let node = &t.nodes[i];
            match node.children {
                None => BigInt::one(),
                Some((a, b)) => {
                    let top = node
                        .grid
                        .as_ref()
                        .map_or_else(BigInt::one, |g| BigInt::from(g.search_range_max));
                    walk(t, a).max(top * walk(t, b))
                }
            }
        }
        walk(self, self.root)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .map(|n| {
                serde_json::json!({
                    "block": [n.block.start, n.block.end],
                    "form": n.form.to_json(),
                    "s": n.s.as_ref().map(|s| s.to_string()),
                    "degree": n.result.as_ref().map(|r| r.polynomial.deg0()),
                    "distinct_roots": n.roots.as_ref().map(|r| r.len()),
                })
            })
            .collect();
        serde_json::json!({
            "coefficients": self.root_form().to_json(),
            "oracle_calls": self.oracle_calls,
            "nodes": nodes,
        })
    }
}

/// A separating block for the root combination, kept symbolic.
#[derive(Clone, Debug)]
pub struct SlfFamily {
    pub family: FormFamily,
    pub block: SeparatingInterval,
    /// The tree below the root; the root node holds `family.at(s_star)` and
    /// no elimination polynomial yet.
    pub tree: SlfTree,
}

impl SlfFamily {
    pub fn block_range(&self) -> Range<i64> {
        let b = self.block.block();
        b.start as i64..b.end as i64
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": self.family.base.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "slope": self.family.slope.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "block": [self.block.s_star, self.block.s_star + self.block.block_length - 1],
            "oracle_calls": self.tree.oracle_calls,
        })
    }
}

fn node_roots(r: &EliminationResult) -> Result<RootSet> {
    isolate(&r.polynomial.squarefree_part()?, INITIAL_QUALITY)
}

struct Builder<'a> {
    system: &'a PolynomialSystem,
    oracle: &'a mut dyn EliminationOracle,
    nodes: Vec<SlfNode>,
    calls: u64,
}

impl Builder<'_> {
    fn eliminate(&mut self, form: &LinearForm) -> Result<(EliminationResult, RootSet)> {
        self.calls += 1;
        let r = self.oracle.eliminate(self.system, form)?;
        let roots = node_roots(&r)?;
        Ok((r, roots))
    }

    /// Builds the subtree over `block`. With `root_block = Some(c)` the node
    /// is the family root: its separating block has length `c` and no
    /// elimination is done.
    fn build(&mut self, block: Range<usize>, root_block: Option<u64>) -> Result<usize> {
        let n = self.system.num_vars();
        if block.len() == 1 {
            let form = LinearForm::coordinate(n, block.start);
            let (r, roots) = if root_block.is_some() {
                (None, None)
            } else {
                let (r, roots) = self.eliminate(&form)?;
                (Some(r), Some(roots))
            };
            self.nodes.push(SlfNode {
                block,
                form,
                s: None,
                children: None,
                grid: None,
                result: r,
                roots,
            });
            return Ok(self.nodes.len() - 1);
        }
        let mid = block.start + block.len().div_ceil(2);
        let a = self.build(block.start..mid, None)?;
        let b = self.build(mid..block.end, None)?;
        let grid = {
            let x = self.nodes[a].roots.as_ref().expect("child roots");
            let y = self.nodes[b].roots.as_ref().expect("child roots");
            find_separating_block(x, y, root_block.unwrap_or(1))?
        };
        let s = BigInt::from(grid.s_star);
        let form = self.nodes[a].form.combine(&self.nodes[b].form, &s)?;
        let (r, roots) = if root_block.is_some() {
            (None, None)
        } else {
            let (r, roots) = self.eliminate(&form)?;
            (Some(r), Some(roots))
        };
        self.nodes.push(SlfNode {
            block,
            form,
            s: Some(s),
            children: Some((a, b)),
            grid: Some(grid),
            result: r,
            roots,
        });
        Ok(self.nodes.len() - 1)
    }
}

fn build(
    system: &PolynomialSystem,
    oracle: &mut dyn EliminationOracle,
    root_block: Option<u64>,
) -> Result<SlfTree> {
    let mut b = Builder {
        system,
        oracle,
        nodes: Vec::new(),
        calls: 0,
    };
    let root = b.build(0..system.num_vars(), root_block)?;
    Ok(SlfTree {
        nodes: b.nodes,
        root,
        oracle_calls: b.calls,
    })
}

/// Separating linear form for the solutions of `system`.
pub fn build_slf_tree(system: &PolynomialSystem, oracle: &mut dyn EliminationOracle) -> Result<SlfTree> {
    build(system, oracle, None)
}

/// Block length `2nd + 1` used at the family root.
pub fn family_block_length(system: &PolynomialSystem) -> u64 {
    2 * system.num_vars() as u64 * system.max_degree().max(1) as u64 + 1
}

/// Like [`build_slf_tree`], but the root combination returns a whole block
/// of `2nd + 1` separating integers and is not eliminated.
pub fn build_slf_family(system: &PolynomialSystem, oracle: &mut dyn EliminationOracle) -> Result<SlfFamily> {
    build_slf_family_with_block(system, oracle, family_block_length(system))
}

/// Family with a root block of length `c` instead of `2nd + 1`.
pub fn build_slf_family_with_block(
    system: &PolynomialSystem,
    oracle: &mut dyn EliminationOracle,
    c: u64,
) -> Result<SlfFamily> {
    if c == 0 {
        return Err(Error::OutOfRange("block length must be positive".into()));
    }
    let tree = build(system, oracle, Some(c))?;
    let root = tree.root_node();
    let (family, block) = match root.children {
        Some((a, b)) => (
            FormFamily::new(
                tree.nodes[a].form.coeffs().to_vec(),
                tree.nodes[b].form.coeffs().to_vec(),
                root.form.pivot(),
            )?,
            root.grid.clone().expect("internal root has a block"),
        ),
        None => (
            FormFamily::new(
                root.form.coeffs().to_vec(),
                vec![BigInt::zero(); system.num_vars()],
                root.form.pivot(),
            )?,
            SeparatingInterval {
                s_star: 1,
                block_length: c,
                search_range_max: c,
                level_counts: Vec::new(),
            },
        ),
    };
    Ok(SlfFamily { family, block, tree })
}

/// Picks `s` in the family block whose shear gives every equation a
/// top-degree term free of the pivot, eliminates along `l(s)` and returns
/// the completed tree with a certified-strong root polynomial.
pub fn select_strong_slf(
    family: SlfFamily,
    system: &PolynomialSystem,
    oracle: &mut dyn EliminationOracle,
    seed: u64,
) -> Result<SlfTree> {
    if !check_no_infinity(system) {
        return Err(Error::SolutionsAtInfinity);
    }
    // a single variable has no pivot-free terms; its elimination is exact
    let (form, lambda_star) = if system.num_vars() == 1 {
        (family.family.at(&BigInt::zero()), BigInt::zero())
    } else {
        let choice = choose_shear(system, &family.family, family.block_range(), seed)?;
        (choice.form, choice.lambda_star)
    };
    let mut tree = family.tree;
    let mut r = oracle.eliminate(system, &form)?;
    tree.oracle_calls += 1;
    if r.strong != Strongness::CertifiedStrong {
        return Err(Error::Certification(
            "elimination along the chosen form is not certified strong".into(),
        ));
    }
    r.shear_lambda = Some(lambda_star.clone());
    let roots = node_roots(&r)?;
    let root = tree.root;
    let node = &mut tree.nodes[root];
    if node.children.is_some() {
        node.s = Some(lambda_star);
    }
    node.form = form;
    node.result = Some(r);
    node.roots = Some(roots);
    Ok(tree)
}
