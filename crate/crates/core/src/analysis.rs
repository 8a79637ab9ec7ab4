use crate::chartable::{dixon_schneider, CharacterTable};
use crate::classes::ClassData;
use crate::error::Result;
use crate::group::{FiniteGroup, GroupSpec, Limits};
use crate::structure::StructureConstants;

/// A group together with everything derived from it that the block and counting code needs.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub label: String,
    pub group: FiniteGroup,
    pub classes: ClassData,
    pub constants: StructureConstants,
    pub table: CharacterTable,
}

impl Analysis {
    /// Enumerates the group and computes its character table.
    pub fn new(label: impl Into<String>, spec: &GroupSpec, limits: Limits) -> Result<Self> {
        let group = FiniteGroup::enumerate_with(spec, limits)?;
        Self::from_group(label, group)
    }

    pub fn from_group(label: impl Into<String>, group: FiniteGroup) -> Result<Self> {
        let classes = ClassData::compute(&group);
        let constants = StructureConstants::compute(&group, &classes);
        let table = dixon_schneider(&group, &classes, &constants)?;
        Ok(Analysis {
            label: label.into(),
            group,
            classes,
            constants,
            table,
        })
    }

    /// Shorthand for builtin groups, e.g. `"builtin:alternating:5"`.
    pub fn builtin(spec: &str) -> Result<Self> {
        Self::new(spec, &GroupSpec::builtin(spec)?, Limits::default())
    }

    /// Replaces the computed table with an imported one (already verified on import).
    pub fn with_table(mut self, table: CharacterTable) -> Self {
        self.table = table;
        self
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}
