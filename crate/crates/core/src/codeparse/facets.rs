use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::lexer::{Token, TokenKind};

/// The six code-token categories pulled from a snippet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKind {
    ImportDeclaration,
    MethodDeclaration,
    MethodInvocation,
    VariableType,
    VariableDeclaration,
    ClassInstance,
}

impl FacetKind {
    pub const ALL: [FacetKind; 6] = [
        FacetKind::ImportDeclaration,
        FacetKind::MethodDeclaration,
        FacetKind::MethodInvocation,
        FacetKind::VariableType,
        FacetKind::VariableDeclaration,
        FacetKind::ClassInstance,
    ];
}

/// Code facets of one source text. Every set holds non-empty identifiers;
/// imports hold dotted canonical names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFacets {
    pub imports: BTreeSet<String>,
    pub method_declarations: BTreeSet<String>,
    pub method_invocations: BTreeSet<String>,
    pub variable_types: BTreeSet<String>,
    pub variable_declarations: BTreeSet<String>,
    pub class_instances: BTreeSet<String>,
}

impl CodeFacets {
    pub fn get(&self, kind: FacetKind) -> &BTreeSet<String> {
        match kind {
            FacetKind::ImportDeclaration => &self.imports,
            FacetKind::MethodDeclaration => &self.method_declarations,
            FacetKind::MethodInvocation => &self.method_invocations,
            FacetKind::VariableType => &self.variable_types,
            FacetKind::VariableDeclaration => &self.variable_declarations,
            FacetKind::ClassInstance => &self.class_instances,
        }
    }

    pub fn get_mut(&mut self, kind: FacetKind) -> &mut BTreeSet<String> {
        match kind {
            FacetKind::ImportDeclaration => &mut self.imports,
            FacetKind::MethodDeclaration => &mut self.method_declarations,
            FacetKind::MethodInvocation => &mut self.method_invocations,
            FacetKind::VariableType => &mut self.variable_types,
            FacetKind::VariableDeclaration => &mut self.variable_declarations,
            FacetKind::ClassInstance => &mut self.class_instances,
        }
    }

    pub fn is_empty(&self) -> bool {
        FacetKind::ALL.iter().all(|k| self.get(*k).is_empty())
    }

    /// All `(kind, term)` pairs in kind order, then term order.
    pub fn iter(&self) -> impl Iterator<Item = (FacetKind, &str)> + '_ {
        FacetKind::ALL
            .into_iter()
            .flat_map(move |k| self.get(k).iter().map(move |t| (k, t.as_str())))
    }

    pub fn merge(&mut self, other: CodeFacets) {
        let CodeFacets {
            imports,
            method_declarations,
            method_invocations,
            variable_types,
            variable_declarations,
            class_instances,
        } = other;
        self.imports.extend(imports);
        self.method_declarations.extend(method_declarations);
        self.method_invocations.extend(method_invocations);
        self.variable_types.extend(variable_types);
        self.variable_declarations.extend(variable_declarations);
        self.class_instances.extend(class_instances);
    }
}

/// Simple class names: anything ending in an identifier whose first
/// character is uppercase.
pub(crate) fn is_capitalized(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

struct Extractor<'t, 'a> {
    toks: &'t [Token<'a>],
    facets: CodeFacets,
    receivers: BTreeSet<String>,
    /// Type of the declarator list in progress, with its paren depth.
    pending: Option<(&'a str, usize)>,
}

/// Apply the token patterns to an already-unwrapped token stream.
pub(crate) fn extract(toks: &[Token<'_>]) -> CodeFacets {
    let mut ex = Extractor { toks, facets: CodeFacets::default(), receivers: BTreeSet::new(), pending: None };
    ex.run();
    let Extractor { mut facets, receivers, .. } = ex;
    for r in receivers {
        if !facets.variable_declarations.contains(&r) {
            facets.variable_types.insert(r);
        }
    }
    facets
}

impl<'t, 'a> Extractor<'t, 'a> {
    fn at(&self, i: usize, text: &str) -> bool {
        self.toks.get(i).is_some_and(|t| t.is(text))
    }

    fn ident(&self, i: usize) -> bool {
        self.toks.get(i).is_some_and(Token::is_ident)
    }

    fn run(&mut self) {
        let mut paren_depth = 0usize;
        let mut i = 0;
        while i < self.toks.len() {
            let t = self.toks[i];
            if t.is("import") || t.is("package") {
                i = self.header(i);
                continue;
            }
            match t.text {
                "(" if t.kind == TokenKind::Punct => paren_depth += 1,
                ")" if t.kind == TokenKind::Punct => paren_depth = paren_depth.saturating_sub(1),
                ";" if t.kind == TokenKind::Punct => self.pending = None,
                _ => {}
            }
            if t.is("new") {
                self.instance_creation(i);
            } else if t.is_ident() && self.at(i + 1, "(") {
                self.call_or_declaration(i);
            } else if t.is_ident() {
                self.variable(i, paren_depth);
            }
            i += 1;
        }
    }

    /// `import [static] a.b.C;` and `package a.b;`. Returns the index after `;`.
    fn header(&mut self, i: usize) -> usize {
        let is_import = self.toks[i].text == "import";
        let mut j = i + 1;
        if self.at(j, "static") {
            j += 1;
        }
        let mut parts: Vec<&str> = Vec::new();
        let mut wildcard = false;
        while j < self.toks.len() && !self.at(j, ";") {
            let t = self.toks[j];
            if t.is_ident() {
                parts.push(t.text);
            } else if t.is("*") {
                wildcard = true;
            } else if !t.is(".") {
                break;
            }
            j += 1;
        }
        if is_import && !wildcard && parts.len() >= 2 {
            self.facets.imports.insert(parts.join("."));
        }
        j + 1
    }

    fn instance_creation(&mut self, i: usize) {
        let mut j = i + 1;
        let mut last = None;
        while self.ident(j) {
            last = Some(self.toks[j].text);
            if self.at(j + 1, ".") && self.ident(j + 2) {
                j += 2;
            } else {
                j += 1;
                break;
            }
        }
        let Some(name) = last else { return };
        if self.at(j, "<") {
            j = self.skip_angles_forward(j);
        }
        if self.at(j, "(") {
            self.facets.class_instances.insert(name.to_string());
        }
    }

    fn skip_angles_forward(&self, mut j: usize) -> usize {
        let mut depth = 0usize;
        while j < self.toks.len() {
            match self.toks[j].text {
                "<" => depth += 1,
                ">" => {
                    depth -= 1;
                    if depth == 0 {
                        return j + 1;
                    }
                }
                ";" | "{" | "}" | "(" | ")" => return j,
                _ => {}
            }
            j += 1;
        }
        j
    }

    /// Index of the `<` matching the `>` at `j`, if any.
    fn angle_start(&self, mut j: usize) -> Option<usize> {
        let mut depth = 0usize;
        loop {
            match self.toks[j].text {
                ">" => depth += 1,
                "<" => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(j);
                    }
                }
                ";" | "{" | "}" | "(" | ")" | "=" => return None,
                _ => {}
            }
            if j == 0 {
                return None;
            }
            j -= 1;
        }
    }

    fn matching_paren(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for j in open..self.toks.len() {
            let t = &self.toks[j];
            if t.is("(") {
                depth += 1;
            } else if t.is(")") {
                depth -= 1;
                if depth == 0 {
                    return Some(j);
                }
            }
        }
        None
    }

    /// The name (identifier at `j`) is in a `new a.b.C` chain.
    fn follows_new(&self, mut j: usize) -> bool {
        while j >= 2 && self.at(j - 1, ".") && self.ident(j - 2) {
            j -= 2;
        }
        j >= 1 && self.at(j - 1, "new")
    }

    /// The token before the name at `i` can end a return type or is a modifier.
    fn declaration_prefix(&self, i: usize) -> bool {
        if i == 0 {
            return false;
        }
        let prev = self.toks[i - 1];
        if prev.is(">") {
            // `.<T>call(` is a generic invocation
            return match self.angle_start(i - 1) {
                Some(s) => !(s > 0 && self.at(s - 1, ".")),
                None => false,
            };
        }
        if prev.is_ident() {
            return !(i >= 2 && self.at(i - 2, "new")) && !(i >= 2 && self.at(i - 2, "."));
        }
        prev.is_primitive() || prev.is_modifier() || prev.is("]")
    }

    fn call_or_declaration(&mut self, i: usize) {
        let name = self.toks[i].text;
        if self.follows_new(i) {
            return;
        }
        let after = self.matching_paren(i + 1).map(|c| c + 1);
        let body_follows = after.is_some_and(|a| {
            let mut a = a;
            while self.at(a, "[") && self.at(a + 1, "]") {
                a += 2;
            }
            self.at(a, "{") || self.at(a, "throws") || self.at(a, ";")
        });
        let body_brace = after.is_some_and(|a| self.at(a, "{") || self.at(a, "throws"));
        let at_member_start = i == 0 || self.at(i - 1, ";") || self.at(i - 1, "{") || self.at(i - 1, "}");
        let is_declaration = (self.declaration_prefix(i) && body_follows)
            || (at_member_start && is_capitalized(name) && body_brace);
        if is_declaration {
            self.facets.method_declarations.insert(name.to_string());
            return;
        }
        self.facets.method_invocations.insert(name.to_string());
        // receiver at the head of a chain: `JavaCore.getOptions(`
        if i >= 2 && self.at(i - 1, ".") && self.ident(i - 2) && !(i >= 3 && self.at(i - 3, ".")) {
            let recv = self.toks[i - 2].text;
            if is_capitalized(recv) {
                self.receivers.insert(recv.to_string());
            }
        }
    }

    /// `T name =`, `T name;`, `T<..> name,` and `for (T name : xs)`.
    fn variable(&mut self, i: usize, paren_depth: usize) {
        let mut j = i + 1;
        while self.at(j, "[") && self.at(j + 1, "]") {
            j += 2;
        }
        let terminated = self.at(j, "=")
            || self.at(j, ";")
            || self.at(j, ":")
            || (self.at(j, ",") && paren_depth == 0);
        if !terminated || i == 0 {
            return;
        }
        let ty = match self.type_before(i) {
            Some(ty) => {
                if self.at(j, "=") || self.at(j, ",") {
                    self.pending = Some((ty, paren_depth));
                }
                ty
            }
            None => match self.pending {
                Some((ty, depth)) if depth == paren_depth && self.at(i - 1, ",") => ty,
                _ => return,
            },
        };
        let name = self.toks[i].text;
        if ty != "var" {
            self.facets.variable_types.insert(ty.to_string());
        }
        self.facets.variable_declarations.insert(name.to_string());
    }

    /// Base name of a type reference ending right before `i`.
    fn type_before(&self, i: usize) -> Option<&'a str> {
        let mut j = i - 1;
        while self.at(j, "]") && j >= 1 && self.at(j - 1, "[") {
            if j < 2 {
                return None;
            }
            j -= 2;
        }
        if self.at(j, ">") {
            let start = self.angle_start(j)?;
            if start == 0 {
                return None;
            }
            j = start - 1;
        }
        let t = self.toks[j];
        if t.is_primitive() && t.text != "void" {
            return Some(t.text);
        }
        if !t.is_ident() {
            return None;
        }
        // when preceded by `new`, `C x` is not a declaration
        if self.follows_new(j) {
            return None;
        }
        Some(t.text)
    }
}

#[cfg(test)]
mod tests {
    use super::super::lexer::tokenize;
    use super::*;

    fn facets(src: &str) -> CodeFacets {
        extract(&tokenize(src))
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn declarations_and_calls() {
        let f = facets("public int size() { return list.size(); }");
        assert_eq!(f.method_declarations, set(&["size"]));
        assert_eq!(f.method_invocations, set(&["size"]));
    }

    #[test]
    fn generic_and_array_variables() {
        let f = facets("Map<String, List<Integer>> m = x; int[] a = {1}; String s, t;");
        assert_eq!(f.variable_types, set(&["Map", "String", "int"]));
        assert_eq!(f.variable_declarations, set(&["a", "m", "s", "t"]));
    }

    #[test]
    fn parameters_are_not_variables() {
        let f = facets("void f(String a, int b) { for (Item it : items) use(it); }");
        assert_eq!(f.variable_declarations, set(&["it"]));
        assert_eq!(f.variable_types, set(&["Item"]));
    }

    #[test]
    fn qualified_instance_creation() {
        let f = facets("Object o = new java.util.ArrayList<String>(); int[] z = new int[3];");
        assert_eq!(f.class_instances, set(&["ArrayList"]));
        assert!(f.method_invocations.is_empty());
    }

    #[test]
    fn static_receiver_becomes_type_unless_declared() {
        let f = facets("Foo.bar(); Baz Qux = null; Qux.go(); System.out.println(1);");
        assert!(f.variable_types.contains("Foo"));
        assert!(!f.variable_types.contains("System"));
        assert!(!f.variable_types.contains("Qux"));
    }

    #[test]
    fn generic_invocation_is_not_declaration() {
        let f = facets("List<String> xs = Collections.<String>emptyList();");
        assert_eq!(f.method_invocations, set(&["emptyList"]));
        assert!(f.method_declarations.is_empty());
    }

    #[test]
    fn wildcard_imports_are_skipped() {
        let f = facets("import java.util.*; import static org.junit.Assert.assertEquals;");
        assert_eq!(f.imports, set(&["org.junit.Assert.assertEquals"]));
    }

    #[test]
    fn constructors_count_as_declarations() {
        let f = facets("class A { A() { init(); } public A(int x) { } }");
        assert_eq!(f.method_declarations, set(&["A"]));
        assert_eq!(f.method_invocations, set(&["init"]));
    }
}
