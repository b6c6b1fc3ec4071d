use std::collections::{BTreeSet, HashMap};

use crate::diagram::FourCell;

pub type NodeId = usize;

/// A cell instance created at some stage of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestNode {
    pub cell: FourCell,
    pub stage: usize,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

/// Subdivision history of cells: a node's children are the cells that
/// replaced it in the one extension that split it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellForest {
    nodes: Vec<ForestNode>,
}

impl CellForest {
    pub fn add_root(&mut self, cell: FourCell, stage: usize) -> NodeId {
        self.nodes.push(ForestNode {
            cell,
            stage,
            parent: None,
            children: Vec::new(),
        });
        self.nodes.len() - 1
    }

    pub fn add_child(&mut self, parent: NodeId, cell: FourCell, stage: usize) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(ForestNode {
            cell,
            stage,
            parent: Some(parent),
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub fn node(&self, id: NodeId) -> &ForestNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn is_descendant_or_equal(&self, mut x: NodeId, ancestor: NodeId) -> bool {
        loop {
            if x == ancestor {
                return true;
            }
            match self.nodes[x].parent {
                Some(p) => x = p,
                None => return false,
            }
        }
    }

    pub fn under_any(&self, x: NodeId, ancestors: &[NodeId]) -> bool {
        ancestors.iter().any(|&a| self.is_descendant_or_equal(x, a))
    }

    pub fn root_of(&self, mut x: NodeId) -> NodeId {
        while let Some(p) = self.nodes[x].parent {
            x = p;
        }
        x
    }

    pub fn leaves_under(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            if self.is_leaf(x) {
                out.push(x);
            } else {
                stack.extend(self.nodes[x].children.iter().copied());
            }
        }
        out
    }

    /// Elements that are vertices of some leaf cell under any of `roots`.
    pub fn leaf_vertices(
        &self,
        roots: &[NodeId],
        memo: &mut HashMap<NodeId, BTreeSet<usize>>,
    ) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &r in roots {
            let set = memo.entry(r).or_insert_with(|| {
                self.leaves_under(r)
                    .into_iter()
                    .flat_map(|leaf| self.nodes[leaf].cell.vertices())
                    .collect()
            });
            out.extend(set.iter().copied());
        }
        out
    }
}
