//! Triple store with subject/object indexes, entity-type assignments and the
//! derived concept graph.
//!
//! The graph is immutable once loaded: construction happens on a single
//! thread, everything afterwards is read-only and safe to share.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use crate::error::KgError;

/// Handle for an entity in the catalog. Ids are dense and assigned in
/// first-appearance file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(pub u32);

/// Handle for a predicate in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateId(pub u32);

/// Handle for an entity type in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub u32);

/// A single (subject, predicate, object) fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: EntityId,
    pub predicate: PredicateId,
    pub object: EntityId,
}

/// Bijective label <-> dense id mapping for one kind of symbol.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    labels: Vec<String>,
    by_label: HashMap<String, u32>,
}

impl Catalog {
    pub fn intern(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.by_label.get(label) {
            return id;
        }
        let id = self.labels.len() as u32;
        self.labels.push(label.to_string());
        self.by_label.insert(label.to_string(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<u32> {
        self.by_label.get(label).copied()
    }

    pub fn label(&self, id: u32) -> &str {
        &self.labels[id as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Directed tuples of the concept graph: one per subject-side
/// (type, predicate) pair and one per object-side (predicate, type) pair,
/// each witnessed by at least one KG triple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptGraph {
    pub subject_tuples: BTreeSet<(TypeId, PredicateId)>,
    pub object_tuples: BTreeSet<(PredicateId, TypeId)>,
}

impl ConceptGraph {
    pub fn num_edges(&self) -> usize {
        self.subject_tuples.len() + self.object_tuples.len()
    }
}

/// Immutable triple store plus entity-type assignments.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    triples: Vec<Triple>,
    triple_set: HashSet<Triple>,
    // (object, predicate) -> subjects
    index_op: HashMap<(EntityId, PredicateId), BTreeSet<EntityId>>,
    // (subject, predicate) -> objects
    index_sp: HashMap<(EntityId, PredicateId), BTreeSet<EntityId>>,
    entity_types: Vec<BTreeSet<TypeId>>,
    type_entities: Vec<BTreeSet<EntityId>>,
    pub entities: Catalog,
    pub predicates: Catalog,
    pub types: Catalog,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Load a graph from the two TSV files. The types file is read first so
    /// entity and type ids follow its line order; predicate ids follow the
    /// triples file. Every entity referenced by a triple must carry a type.
    pub fn load(triples_path: &Path, types_path: &Path) -> Result<Self, KgError> {
        let types_text = std::fs::read_to_string(types_path).map_err(|source| KgError::Io {
            path: types_path.display().to_string(),
            source,
        })?;
        let triples_text = std::fs::read_to_string(triples_path).map_err(|source| KgError::Io {
            path: triples_path.display().to_string(),
            source,
        })?;
        Self::from_tsv(&triples_text, &types_text)
    }

    /// Parse from in-memory TSV contents (same formats as [`KnowledgeGraph::load`]).
    pub fn from_tsv(triples_tsv: &str, types_tsv: &str) -> Result<Self, KgError> {
        let mut kg = KnowledgeGraph::new();
        for (lineno, line) in types_tsv.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 2 {
                return Err(KgError::Malformed {
                    file: "types".into(),
                    line: lineno + 1,
                    expected: 2,
                    found: cols.len(),
                });
            }
            let e = EntityId(kg.entities.intern(cols[0]));
            let t = TypeId(kg.types.intern(cols[1]));
            kg.assign_type(e, t);
        }
        for (lineno, line) in triples_tsv.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(KgError::Malformed {
                    file: "triples".into(),
                    line: lineno + 1,
                    expected: 3,
                    found: cols.len(),
                });
            }
            let subject = EntityId(kg.entities.intern(cols[0]));
            let predicate = PredicateId(kg.predicates.intern(cols[1]));
            let object = EntityId(kg.entities.intern(cols[2]));
            kg.insert_triple(Triple {
                subject,
                predicate,
                object,
            });
        }
        kg.validate()?;
        Ok(kg)
    }

    /// Register an entity type. Grows the per-entity table as needed.
    pub fn assign_type(&mut self, entity: EntityId, ty: TypeId) {
        let idx = entity.0 as usize;
        if self.entity_types.len() <= idx {
            self.entity_types.resize(idx + 1, BTreeSet::new());
        }
        self.entity_types[idx].insert(ty);
        let tidx = ty.0 as usize;
        if self.type_entities.len() <= tidx {
            self.type_entities.resize(tidx + 1, BTreeSet::new());
        }
        self.type_entities[tidx].insert(entity);
    }

    /// Insert a triple with set semantics: duplicates are stored once.
    pub fn insert_triple(&mut self, t: Triple) {
        if !self.triple_set.insert(t) {
            return;
        }
        self.triples.push(t);
        self.index_op
            .entry((t.object, t.predicate))
            .or_default()
            .insert(t.subject);
        self.index_sp
            .entry((t.subject, t.predicate))
            .or_default()
            .insert(t.object);
    }

    /// Check that every entity carries at least one type.
    pub fn validate(&self) -> Result<(), KgError> {
        for id in 0..self.entities.len() {
            let has_type = self
                .entity_types
                .get(id)
                .map(|s| !s.is_empty())
                .unwrap_or(false);
            if !has_type {
                return Err(KgError::UntypedEntity {
                    label: self.entities.label(id as u32).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn num_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn num_predicates(&self) -> usize {
        self.predicates.len()
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn contains_triple(&self, t: &Triple) -> bool {
        self.triple_set.contains(t)
    }

    fn check_entity(&self, e: EntityId) -> Result<(), KgError> {
        if (e.0 as usize) < self.entities.len() {
            Ok(())
        } else {
            Err(KgError::UnknownId {
                kind: "entity",
                id: e.0,
            })
        }
    }

    fn check_predicate(&self, p: PredicateId) -> Result<(), KgError> {
        if (p.0 as usize) < self.predicates.len() {
            Ok(())
        } else {
            Err(KgError::UnknownId {
                kind: "predicate",
                id: p.0,
            })
        }
    }

    /// All subjects s with (s, predicate, object) in the store.
    pub fn subjects_of(
        &self,
        object: EntityId,
        predicate: PredicateId,
    ) -> Result<BTreeSet<EntityId>, KgError> {
        self.check_entity(object)?;
        self.check_predicate(predicate)?;
        Ok(self
            .index_op
            .get(&(object, predicate))
            .cloned()
            .unwrap_or_default())
    }

    /// All objects o with (subject, predicate, o) in the store.
    pub fn objects_of(
        &self,
        subject: EntityId,
        predicate: PredicateId,
    ) -> Result<BTreeSet<EntityId>, KgError> {
        self.check_entity(subject)?;
        self.check_predicate(predicate)?;
        Ok(self
            .index_sp
            .get(&(subject, predicate))
            .cloned()
            .unwrap_or_default())
    }

    /// The stored type set of an entity.
    pub fn types_of(&self, entity: EntityId) -> Result<&BTreeSet<TypeId>, KgError> {
        self.check_entity(entity)?;
        Ok(&self.entity_types[entity.0 as usize])
    }

    /// All entities carrying the given type.
    pub fn entities_of_type(&self, ty: TypeId) -> BTreeSet<EntityId> {
        self.type_entities
            .get(ty.0 as usize)
            .cloned()
            .unwrap_or_default()
    }

    pub fn entity_by_label(&self, label: &str) -> Option<EntityId> {
        self.entities.get(label).map(EntityId)
    }

    pub fn predicate_by_label(&self, label: &str) -> Option<PredicateId> {
        self.predicates.get(label).map(PredicateId)
    }

    pub fn type_by_label(&self, label: &str) -> Option<TypeId> {
        self.types.get(label).map(TypeId)
    }

    pub fn entity_label(&self, e: EntityId) -> &str {
        self.entities.label(e.0)
    }

    pub fn predicate_label(&self, p: PredicateId) -> &str {
        self.predicates.label(p.0)
    }

    pub fn type_label(&self, t: TypeId) -> &str {
        self.types.label(t.0)
    }

    /// Substitute entities by their types in every triple: (s, p, o) yields
    /// the subject-side tuples (type(s), p) and object-side tuples (p, type(o)).
    pub fn build_concept_graph(&self) -> ConceptGraph {
        let mut cg = ConceptGraph::default();
        for t in &self.triples {
            for &ts in &self.entity_types[t.subject.0 as usize] {
                cg.subject_tuples.insert((ts, t.predicate));
            }
            for &to in &self.entity_types[t.object.0 as usize] {
                cg.object_tuples.insert((t.predicate, to));
            }
        }
        cg
    }

    /// Serialize back to the TSV formats. Lines follow id order, so a graph
    /// loaded from files exported by this function round-trips byte-exactly.
    pub fn to_tsv(&self) -> (String, String) {
        let mut triples = String::new();
        for t in &self.triples {
            triples.push_str(self.entity_label(t.subject));
            triples.push('\t');
            triples.push_str(self.predicate_label(t.predicate));
            triples.push('\t');
            triples.push_str(self.entity_label(t.object));
            triples.push('\n');
        }
        let mut types = String::new();
        for e in 0..self.entities.len() {
            for ty in &self.entity_types[e] {
                types.push_str(self.entities.label(e as u32));
                types.push('\t');
                types.push_str(self.type_label(*ty));
                types.push('\n');
            }
        }
        (triples, types)
    }
}

impl fmt::Display for KnowledgeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kg: {} triples, {} entities, {} predicates, {} types",
            self.triples.len(),
            self.entities.len(),
            self.predicates.len(),
            self.types.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn biden_kg() -> KnowledgeGraph {
        KnowledgeGraph::from_tsv(
            "JoeBiden\tIsPresidentOf\tUSA\n",
            "JoeBiden\tPerson\nUSA\tCountry\n",
        )
        .unwrap()
    }

    #[test]
    fn load_single_triple() {
        let kg = biden_kg();
        assert_eq!(kg.triples().len(), 1);
        assert_eq!(kg.num_entities(), 2);
        assert_eq!(kg.num_types(), 2);
        assert_eq!(kg.num_predicates(), 1);
    }

    #[test]
    fn empty_triples_nonempty_types() {
        let kg = KnowledgeGraph::from_tsv("", "a\tT\nb\tT\nc\tU\n").unwrap();
        assert_eq!(kg.triples().len(), 0);
        assert_eq!(kg.num_entities(), 3);
    }

    #[test]
    fn duplicate_triples_stored_once() {
        let kg = KnowledgeGraph::from_tsv(
            "a\tp\tb\na\tp\tb\n",
            "a\tT\nb\tT\n",
        )
        .unwrap();
        assert_eq!(kg.triples().len(), 1);
    }

    #[test]
    fn malformed_line_reports_position() {
        let err = KnowledgeGraph::from_tsv("a\tp\n", "a\tT\n").unwrap_err();
        match err {
            KgError::Malformed { line, found, .. } => {
                assert_eq!(line, 1);
                assert_eq!(found, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn untyped_entity_rejected() {
        let err = KnowledgeGraph::from_tsv("a\tp\tb\n", "a\tT\n").unwrap_err();
        assert!(matches!(err, KgError::UntypedEntity { .. }));
    }

    #[test]
    fn subjects_and_objects() {
        let kg = biden_kg();
        let usa = kg.entity_by_label("USA").unwrap();
        let biden = kg.entity_by_label("JoeBiden").unwrap();
        let pres = kg.predicate_by_label("IsPresidentOf").unwrap();
        assert_eq!(
            kg.subjects_of(usa, pres).unwrap(),
            BTreeSet::from([biden])
        );
        assert_eq!(kg.objects_of(biden, pres).unwrap(), BTreeSet::from([usa]));
        // no matching triples -> empty set
        assert!(kg.subjects_of(biden, pres).unwrap().is_empty());
    }

    #[test]
    fn unknown_id_is_lookup_error() {
        let kg = biden_kg();
        let err = kg.subjects_of(EntityId(99), PredicateId(0)).unwrap_err();
        assert!(matches!(err, KgError::UnknownId { .. }));
    }

    #[test]
    fn types_of_multi_type_entity() {
        let kg = KnowledgeGraph::from_tsv("", "a\tT\na\tU\n").unwrap();
        let a = kg.entity_by_label("a").unwrap();
        assert_eq!(kg.types_of(a).unwrap().len(), 2);
    }

    #[test]
    fn concept_graph_from_worked_triple() {
        let kg = biden_kg();
        let cg = kg.build_concept_graph();
        let person = kg.type_by_label("Person").unwrap();
        let country = kg.type_by_label("Country").unwrap();
        let pres = kg.predicate_by_label("IsPresidentOf").unwrap();
        assert_eq!(cg.subject_tuples, BTreeSet::from([(person, pres)]));
        assert_eq!(cg.object_tuples, BTreeSet::from([(pres, country)]));
    }

    #[test]
    fn concept_graph_empty_kg() {
        let kg = KnowledgeGraph::from_tsv("", "a\tT\n").unwrap();
        assert_eq!(kg.build_concept_graph().num_edges(), 0);
    }

    #[test]
    fn deterministic_reload() {
        let kg = biden_kg();
        let (t, ty) = kg.to_tsv();
        let kg2 = KnowledgeGraph::from_tsv(&t, &ty).unwrap();
        assert_eq!(kg.triples(), kg2.triples());
        assert_eq!(kg.to_tsv(), kg2.to_tsv());
    }
}
