#	cdplus - CD+ knowledge representation engine and dialogue simulator
#	Copyright (C) 2024 the cdplus authors
#
#	This file is part of cdplus.
#
#	cdplus is free software; you can redistribute it and/or modify
#	it under the terms of the GNU General Public License as published by
#	the Free Software Foundation; this program is ONLY licensed under
#	version 3 of the License, later versions are explicitly excluded.
#
#	cdplus is distributed in the hope that it will be useful,
#	but WITHOUT ANY WARRANTY; without even the implied warranty of
#	MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#	GNU General Public License for more details.
#
#	You should have received a copy of the GNU General Public License
#	along with cdplus; if not, write to the Free Software
#	Foundation, Inc., 59 Temple Place, Suite 330, Boston, MA  02111-1307  USA

import logging
from dataclasses import dataclass
from typing import Optional, Union
from .CDGraph import CDStore, EntityRef, ROLE_KEYWORDS
from .CDXFormat import SAtom, SList
from .Concepts import PrimitiveAct, StateName, Modifier, LinkKind, Sort
from .Exceptions import SortMismatch, UnboundVariable, RuleSyntaxError

_log = logging.getLogger(__name__)

@dataclass(frozen=True)
class Variable():
	name: str
	sort: Sort

	def __str__(self):
		return "?%s" % (self.name)

@dataclass(frozen=True)
class PatternCz():
	actor: Union[EntityRef, Variable]
	act: PrimitiveAct
	obj: object = None
	source: Union[EntityRef, Variable, None] = None
	to: Union[EntityRef, Variable, None] = None
	instrument: Union[EntityRef, Variable, None] = None
	mods: Optional[frozenset] = frozenset()
	state: Union[StateName, Variable, None] = None

@dataclass(frozen=True)
class PatternLink():
	kind: LinkKind
	source: object = None
	target: object = None
	mods: Optional[frozenset] = frozenset()
	entity: Union[EntityRef, Variable, None] = None
	state: Union[StateName, Variable, None] = None

Term = Union[EntityRef, Variable, PatternCz, PatternLink, None]

class Bindings(dict):
	def bind(self, name: str, value) -> "Bindings":
		extended = Bindings(self)
		extended[name] = value
		return extended

	def render(self, name: str, store: CDStore) -> str:
		value = self[name]
		if isinstance(value, str):
			return store.canonicalize(value)
		return str(value)

	def canonical(self, store: CDStore) -> tuple:
		"""Binding identity by content, independent of node ids."""
		return tuple((name, self.render(name, store)) for name in sorted(self))

class Pattern():
	def __init__(self, root: Union[PatternCz, PatternLink]):
		self._root = root
		self._variables = { }
		self._collect(root, None)

	@property
	def root(self) -> Union[PatternCz, PatternLink]:
		return self._root

	@property
	def variables(self) -> dict[str, Sort]:
		return dict(self._variables)

	def _declare(self, variable: Variable, allowed: tuple):
		if variable.sort not in allowed:
			raise SortMismatch("Variable %s of sort %s cannot appear where %s is expected." % (variable, variable.sort.value, "/".join(sort.value for sort in allowed)))
		known = self._variables.get(variable.name)
		if (known is not None) and (known != variable.sort):
			raise SortMismatch("Variable %s used as both %s and %s." % (variable, known.value, variable.sort.value))
		self._variables[variable.name] = variable.sort

	def _collect(self, term: Term, allowed: Optional[tuple]):
		if isinstance(term, Variable):
			self._declare(term, allowed)
		elif isinstance(term, PatternCz):
			for value in (term.actor, term.source, term.to, term.instrument):
				self._collect(value, (Sort.Entity, ))
			self._collect(term.obj, (Sort.Entity, Sort.Cz))
			self._collect(term.state, (Sort.State, ))
		elif isinstance(term, PatternLink):
			self._collect(term.source, (Sort.Cz, ))
			self._collect(term.target, (Sort.Cz, ))
			self._collect(term.entity, (Sort.Entity, ))
			self._collect(term.state, (Sort.State, ))

	@classmethod
	def from_sexpr(cls, node: SList, sorts: Optional[dict[str, Sort]] = None) -> "Pattern":
		return cls(_PatternReader(sorts).read(node))

	def __str__(self):
		return "Pattern<%s>" % (str(self._root))

class _PatternReader():
	def __init__(self, sorts: Optional[dict[str, Sort]]):
		self._sorts = dict(sorts or { })

	def _fail(self, message: str, node):
		raise RuleSyntaxError("%d:%d: %s" % (node.line, node.col, message))

	def _variable(self, node, default: Sort) -> Optional[Variable]:
		if isinstance(node, SAtom) and node.is_variable:
			name = node.value[1:]
			return Variable(name = name, sort = self._sorts.setdefault(name, default))
		if isinstance(node, SList) and (len(node.items) == 2) and all(isinstance(item, SAtom) for item in node.items) and node.items[0].is_variable:
			sort = Sort.lookup(node.items[1].value)
			if sort is None:
				self._fail("Unknown sort '%s'." % (node.items[1].value), node)
			name = node.items[0].value[1:]
			if self._sorts.setdefault(name, sort) != sort:
				raise SortMismatch("Variable ?%s declared as %s but used as %s." % (name, sort.value, self._sorts[name].value))
			return Variable(name = name, sort = sort)
		return None

	def _entity(self, node) -> Union[EntityRef, Variable]:
		variable = self._variable(node, Sort.Entity)
		if variable is not None:
			return variable
		if (not isinstance(node, SAtom)) or (not EntityRef.is_entity_symbol(str(node.value))):
			self._fail("Expected an entity or variable.", node)
		return EntityRef.parse(node.value)

	def _state(self, node) -> Union[StateName, Variable]:
		variable = self._variable(node, Sort.State)
		if variable is not None:
			return variable
		state = StateName.lookup(node.value) if isinstance(node, SAtom) else None
		if state is None:
			self._fail("Expected a state or variable.", node)
		return state

	def _mods(self, node) -> Optional[frozenset]:
		if isinstance(node, SAtom) and (node.value == "any"):
			return None
		if not isinstance(node, SList):
			self._fail("Modifiers must be a list or 'any'.", node)
		mods = [ Modifier.lookup(atom.value) for atom in node.items ]
		if None in mods:
			self._fail("Unknown modifier in %s." % (node.flat()), node)
		return Modifier.check(mods)

	def _conceptual(self, node, default: Sort) -> Term:
		variable = self._variable(node, default)
		if variable is not None:
			return variable
		if isinstance(node, SList):
			return self.read(node)
		return self._entity(node)

	def read(self, node: SList) -> Union[PatternCz, PatternLink]:
		if not isinstance(node, SList):
			self._fail("Expected a pattern form.", node)
		(positional, keywords) = node.split()
		if node.head == "cz":
			act = PrimitiveAct.lookup(keywords[":act"].value) if (":act" in keywords) else None
			if (act is None) or (":actor" not in keywords):
				self._fail("Pattern needs an :actor and a valid :act.", node)
			fields = { }
			for (role, keyword) in ROLE_KEYWORDS.items():
				if keyword not in keywords:
					continue
				if role == "obj":
					fields[role] = self._conceptual(keywords[keyword], Sort.Cz)
				else:
					fields[role] = self._entity(keywords[keyword])
			if ":state" in keywords:
				fields["state"] = self._state(keywords[":state"])
			if ":mods" in keywords:
				fields["mods"] = self._mods(keywords[":mods"])
			return PatternCz(actor = self._entity(keywords[":actor"]), act = act, **fields)

		kind = LinkKind.lookup(node.head)
		if kind is None:
			self._fail("Unknown pattern form '%s'." % (node.head), node)
		mods = self._mods(keywords[":mods"]) if (":mods" in keywords) else frozenset()
		if kind == LinkKind.StateAttr:
			if len(positional) != 3:
				self._fail("state-attr pattern takes three arguments.", node)
			return PatternLink(kind = kind, target = self._conceptual(positional[2], Sort.Cz), mods = mods, entity = self._entity(positional[0]), state = self._state(positional[1]))
		if len(positional) != 2:
			self._fail("%s pattern takes two endpoints." % (kind.value), node)
		return PatternLink(kind = kind, source = self._conceptual(positional[0], Sort.Cz), target = self._conceptual(positional[1], Sort.Cz), mods = mods)

def _same(store: CDStore, bound, value) -> bool:
	if isinstance(bound, str) and isinstance(value, str):
		return (bound == value) or (store.canonicalize(bound) == store.canonicalize(value))
	return bound == value

def bind_variable(variable: Variable, value, store: CDStore, bindings: Bindings) -> Optional[Bindings]:
	if variable.sort == Sort.Entity and not isinstance(value, EntityRef):
		return None
	if variable.sort == Sort.Cz and not isinstance(value, str):
		return None
	if variable.sort == Sort.State and not isinstance(value, StateName):
		return None
	if variable.name in bindings:
		return bindings if _same(store, bindings[variable.name], value) else None
	return bindings.bind(variable.name, value)

def _unify_leaf(term, value, store: CDStore, bindings: Bindings) -> Optional[Bindings]:
	if isinstance(term, Variable):
		if value is None:
			return None
		return bind_variable(term, value, store, bindings)
	return bindings if (term == value) else None

def _unify_conceptual(term: Term, value, store: CDStore, bindings: Bindings) -> Optional[Bindings]:
	if isinstance(term, (PatternCz, PatternLink)):
		if not isinstance(value, str):
			return None
		return _unify_node(term, value, store, bindings)
	return _unify_leaf(term, value, store, bindings)

def _unify_node(term: Union[PatternCz, PatternLink], node_id: str, store: CDStore, bindings: Bindings) -> Optional[Bindings]:
	if isinstance(term, PatternCz):
		if not store.is_cz(node_id):
			return None
		cz = store.cz(node_id)
		if (term.act != cz.act) or ((term.mods is not None) and (term.mods != cz.mods)):
			return None
		state = None if (cz.state is None) else cz.state.name
		steps = [ (term.actor, cz.actor), (term.source, cz.source), (term.to, cz.to), (term.instrument, cz.instrument), (term.state, state) ]
		for (sub_term, value) in steps:
			bindings = _unify_leaf(sub_term, value, store, bindings)
			if bindings is None:
				return None
		return _unify_conceptual(term.obj, cz.obj, store, bindings)

	if not store.is_link(node_id):
		return None
	link = store.link(node_id)
	if (term.kind != link.kind) or ((term.mods is not None) and (term.mods != link.mods)):
		return None
	if link.kind == LinkKind.StateAttr:
		bindings = _unify_leaf(term.entity, link.entity, store, bindings)
		if bindings is not None:
			bindings = _unify_leaf(term.state, link.state.name, store, bindings)
	else:
		bindings = _unify_conceptual(term.source, link.source, store, bindings)
	if bindings is None:
		return None
	return _unify_conceptual(term.target, link.target, store, bindings)

def unify(pattern: Pattern, store: CDStore, root: str, bindings: Optional[dict] = None) -> Optional[Bindings]:
	return _unify_node(pattern.root, root, store, Bindings(bindings or { }))

def find_all(pattern: Pattern, store: CDStore, bindings: Optional[dict] = None) -> list[tuple[str, Bindings]]:
	if isinstance(pattern.root, PatternCz):
		candidates = [ cz.cz_id for cz in store.czs ]
	else:
		candidates = [ link.link_id for link in store.links ]
	results = [ ]
	for node_id in candidates:
		match = unify(pattern, store, node_id, bindings)
		if match is not None:
			results.append((node_id, match))
	return results

def _resolve(term, bindings: dict):
	if isinstance(term, Variable):
		if term.name not in bindings:
			raise UnboundVariable("No binding for %s." % (term))
		return bindings[term.name]
	return term

def _build(term: Term, bindings: dict, store: CDStore):
	if isinstance(term, (PatternCz, PatternLink)) and (term.mods is None):
		raise UnboundVariable("Wildcard modifiers in %s cannot be instantiated." % (str(term)))
	if isinstance(term, PatternCz):
		return store.assert_cz(
			actor = _resolve(term.actor, bindings), act = term.act,
			obj = _build(term.obj, bindings, store),
			source = _resolve(term.source, bindings), to = _resolve(term.to, bindings), instrument = _resolve(term.instrument, bindings),
			mods = term.mods, state = _resolve(term.state, bindings))
	if isinstance(term, PatternLink):
		if term.kind == LinkKind.StateAttr:
			endpoints = (_resolve(term.entity, bindings), _resolve(term.state, bindings), _build(term.target, bindings, store))
		else:
			endpoints = (_build(term.source, bindings, store), _build(term.target, bindings, store))
		return store.add_link(term.kind, endpoints, mods = term.mods)
	return _resolve(term, bindings)

def substitute(pattern: Pattern, bindings: dict, store: CDStore) -> str:
	"""Instantiates the pattern as fresh nodes; bound cz variables refer to the existing nodes."""
	return _build(pattern.root, bindings, store)
