//! The 19-action logical-form language: typed expression trees over entity,
//! predicate, type and number constants, executable against a
//! [`KnowledgeGraph`](crate::kg::KnowledgeGraph).

mod exec;
mod search;
mod text;
mod tokens;

pub use exec::{execute, ExecOptions};
pub use search::{bfs_search_gold, ConstantPool, SearchOptions};
pub use text::{parse_text, print_text};
pub use tokens::{parse_tokens, PrefixState, Serialized};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::LfError;
use crate::kg::{EntityId, PredicateId, TypeId};

/// Semantic categories. The four entry categories are instantiated by
/// constants parsed from a question; the four intermediate categories only by
/// action outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Entity,
    Predicate,
    EntityType,
    Num,
    Set,
    Dict,
    Boolean,
    Number,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Entity => "entity",
            Category::Predicate => "predicate",
            Category::EntityType => "entity_type",
            Category::Num => "num",
            Category::Set => "set",
            Category::Dict => "dict",
            Category::Boolean => "boolean",
            Category::Number => "number",
        }
    }
}

/// Function symbols of the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    Find,
    FindReverse,
    FilterType,
    FilterMultiTypes,
    FindTupleCounts,
    FindReverseTupleCounts,
    Greater,
    Lesser,
    Equal,
    Approx,
    Atmost,
    Atleast,
    Argmin,
    Argmax,
    IsIn,
    Count,
    Union,
    Intersection,
    Difference,
}

/// All actions, in grammar-table order.
pub const ALL_ACTIONS: [ActionKind; 19] = [
    ActionKind::Find,
    ActionKind::FindReverse,
    ActionKind::FilterType,
    ActionKind::FilterMultiTypes,
    ActionKind::FindTupleCounts,
    ActionKind::FindReverseTupleCounts,
    ActionKind::Greater,
    ActionKind::Lesser,
    ActionKind::Equal,
    ActionKind::Approx,
    ActionKind::Atmost,
    ActionKind::Atleast,
    ActionKind::Argmin,
    ActionKind::Argmax,
    ActionKind::IsIn,
    ActionKind::Count,
    ActionKind::Union,
    ActionKind::Intersection,
    ActionKind::Difference,
];

impl ActionKind {
    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Find => "find",
            ActionKind::FindReverse => "find_reverse",
            ActionKind::FilterType => "filter_type",
            ActionKind::FilterMultiTypes => "filter_multi_types",
            ActionKind::FindTupleCounts => "find_tuple_counts",
            ActionKind::FindReverseTupleCounts => "find_reverse_tuple_counts",
            ActionKind::Greater => "greater",
            ActionKind::Lesser => "lesser",
            ActionKind::Equal => "equal",
            ActionKind::Approx => "approx",
            ActionKind::Atmost => "atmost",
            ActionKind::Atleast => "atleast",
            ActionKind::Argmin => "argmin",
            ActionKind::Argmax => "argmax",
            ActionKind::IsIn => "is_in",
            ActionKind::Count => "count",
            ActionKind::Union => "union",
            ActionKind::Intersection => "intersection",
            ActionKind::Difference => "difference",
        }
    }

    pub fn by_name(name: &str) -> Option<ActionKind> {
        ALL_ACTIONS.iter().copied().find(|a| a.name() == name)
    }

    pub fn result_category(self) -> Category {
        match self {
            ActionKind::Find
            | ActionKind::FindReverse
            | ActionKind::FilterType
            | ActionKind::FilterMultiTypes
            | ActionKind::Greater
            | ActionKind::Lesser
            | ActionKind::Equal
            | ActionKind::Approx
            | ActionKind::Atmost
            | ActionKind::Atleast
            | ActionKind::Argmin
            | ActionKind::Argmax
            | ActionKind::Union
            | ActionKind::Intersection
            | ActionKind::Difference => Category::Set,
            ActionKind::FindTupleCounts | ActionKind::FindReverseTupleCounts => Category::Dict,
            ActionKind::IsIn => Category::Boolean,
            ActionKind::Count => Category::Number,
        }
    }

    /// Declared argument categories. A `Num` slot accepts a number literal or
    /// a number-producing subexpression (`count`), so comparison actions can
    /// compare against computed counts.
    pub fn arg_categories(self) -> &'static [Category] {
        use Category::*;
        match self {
            ActionKind::Find | ActionKind::FindReverse => &[Entity, Predicate],
            ActionKind::FilterType => &[Set, EntityType],
            ActionKind::FilterMultiTypes => &[Set, EntityType, EntityType],
            ActionKind::FindTupleCounts | ActionKind::FindReverseTupleCounts => {
                &[Predicate, EntityType, EntityType]
            }
            ActionKind::Greater
            | ActionKind::Lesser
            | ActionKind::Equal
            | ActionKind::Approx
            | ActionKind::Atmost
            | ActionKind::Atleast => &[Dict, Num],
            ActionKind::Argmin | ActionKind::Argmax => &[Dict],
            ActionKind::IsIn => &[Entity, Set],
            ActionKind::Count => &[Set],
            ActionKind::Union | ActionKind::Intersection | ActionKind::Difference => &[Set, Set],
        }
    }

    pub fn arity(self) -> usize {
        self.arg_categories().len()
    }
}

/// Whether an expression of category `found` may fill a slot declared as
/// `declared`.
pub fn arg_matches(declared: Category, found: Category) -> bool {
    match declared {
        Category::Num => matches!(found, Category::Num | Category::Number),
        other => other == found,
    }
}

/// Expression tree over actions and entry constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Entity(EntityId),
    Predicate(PredicateId),
    EntityType(TypeId),
    NumLit(u64),
    Apply(ActionKind, Vec<Expr>),
}

impl Expr {
    pub fn category(&self) -> Category {
        match self {
            Expr::Entity(_) => Category::Entity,
            Expr::Predicate(_) => Category::Predicate,
            Expr::EntityType(_) => Category::EntityType,
            Expr::NumLit(_) => Category::Num,
            Expr::Apply(a, _) => a.result_category(),
        }
    }

    /// Number of action nodes in the tree (constants are free).
    pub fn action_count(&self) -> usize {
        match self {
            Expr::Apply(_, args) => 1 + args.iter().map(Expr::action_count).sum::<usize>(),
            _ => 0,
        }
    }
}

/// A complete logical form: an action expression over entry constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogicalForm {
    root: Expr,
}

impl LogicalForm {
    /// Wrap an expression. The root must be an action application.
    pub fn new(root: Expr) -> Result<Self, LfError> {
        match root {
            Expr::Apply(..) => Ok(Self { root }),
            other => Err(LfError::Type {
                path: "root".into(),
                expected: "action application".into(),
                found: other.category().name().into(),
            }),
        }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn action_count(&self) -> usize {
        self.root.action_count()
    }

    pub fn serialize(&self) -> Serialized {
        tokens::serialize(self)
    }
}

/// Verify that every node's children match its declared argument categories.
/// The root may produce any category. Reports the first offending node path
/// (child indexes joined by dots, `root` for the root itself).
pub fn typecheck(form: &LogicalForm) -> Result<Category, LfError> {
    fn walk(expr: &Expr, path: &mut Vec<usize>) -> Result<Category, LfError> {
        match expr {
            Expr::Apply(action, args) => {
                let declared = action.arg_categories();
                if args.len() != declared.len() {
                    return Err(LfError::Type {
                        path: path_string(path),
                        expected: format!("{} arguments", declared.len()),
                        found: format!("{} arguments", args.len()),
                    });
                }
                for (i, (arg, want)) in args.iter().zip(declared).enumerate() {
                    path.push(i);
                    let got = walk(arg, path)?;
                    if !arg_matches(*want, got) {
                        return Err(LfError::Type {
                            path: path_string(path),
                            expected: want.name().into(),
                            found: got.name().into(),
                        });
                    }
                    path.pop();
                }
                Ok(action.result_category())
            }
            leaf => Ok(leaf.category()),
        }
    }
    fn path_string(path: &[usize]) -> String {
        if path.is_empty() {
            "root".to_string()
        } else {
            let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
            format!("root.{}", parts.join("."))
        }
    }
    walk(&form.root, &mut Vec::new())
}

/// Runtime result of executing a logical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Set(BTreeSet<EntityId>),
    Dict(BTreeMap<EntityId, u64>),
    Bool(bool),
    Num(u64),
}

impl Value {
    pub fn kind(&self) -> Category {
        match self {
            Value::Set(_) => Category::Set,
            Value::Dict(_) => Category::Dict,
            Value::Bool(_) => Category::Boolean,
            Value::Num(_) => Category::Number,
        }
    }

    pub fn as_set(&self) -> Option<&BTreeSet<EntityId>> {
        match self {
            Value::Set(s) => Some(s),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(e: u32, p: u32) -> Expr {
        Expr::Apply(
            ActionKind::Find,
            vec![Expr::Entity(EntityId(e)), Expr::Predicate(PredicateId(p))],
        )
    }

    #[test]
    fn count_of_find_typechecks() {
        let form = LogicalForm::new(Expr::Apply(ActionKind::Count, vec![find(0, 0)])).unwrap();
        assert_eq!(typecheck(&form).unwrap(), Category::Number);
    }

    #[test]
    fn count_of_entity_fails() {
        let form =
            LogicalForm::new(Expr::Apply(ActionKind::Count, vec![Expr::Entity(EntityId(0))]))
                .unwrap();
        let err = typecheck(&form).unwrap_err();
        match err {
            LfError::Type {
                path,
                expected,
                found,
            } => {
                assert_eq!(path, "root.0");
                assert_eq!(expected, "set");
                assert_eq!(found, "entity");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn union_of_dict_fails() {
        let dict = Expr::Apply(
            ActionKind::FindTupleCounts,
            vec![
                Expr::Predicate(PredicateId(0)),
                Expr::EntityType(TypeId(0)),
                Expr::EntityType(TypeId(1)),
            ],
        );
        let form =
            LogicalForm::new(Expr::Apply(ActionKind::Union, vec![find(0, 0), dict])).unwrap();
        let err = typecheck(&form).unwrap_err();
        assert!(matches!(err, LfError::Type { ref found, .. } if found == "dict"));
    }

    #[test]
    fn num_slot_accepts_count() {
        let dict = Expr::Apply(
            ActionKind::FindTupleCounts,
            vec![
                Expr::Predicate(PredicateId(0)),
                Expr::EntityType(TypeId(0)),
                Expr::EntityType(TypeId(1)),
            ],
        );
        let nested = Expr::Apply(ActionKind::Count, vec![find(0, 0)]);
        let form =
            LogicalForm::new(Expr::Apply(ActionKind::Greater, vec![dict, nested])).unwrap();
        assert_eq!(typecheck(&form).unwrap(), Category::Set);
    }

    #[test]
    fn bare_constant_is_not_a_form() {
        assert!(LogicalForm::new(Expr::Entity(EntityId(0))).is_err());
    }
}
