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

import os
import logging
import pyparsing
from dataclasses import dataclass, field
from typing import Optional, Union, Iterator
from .CDGraph import CDStore, EntityRef, ROLES, ROLE_KEYWORDS
from .Concepts import PrimitiveAct, StateName, Modifier, LinkKind
from .Exceptions import CDPlusError, CDXSyntaxError, UnknownAct, UnknownState, DanglingLabelRef, DanglingRef, LabelClash, ElaborationCycle

_log = logging.getLogger(__name__)

LINE_WIDTH = 78
RAW_SECTIONS = ("rule", "template", "lexeme", "scenario", "world", "agent", "perturb")
_KEYWORD_ROLES = { keyword: role for (role, keyword) in ROLE_KEYWORDS.items() }
_STRING_ESCAPES = { "\\": "\\\\", "\"": "\\\"", "\n": "\\n", "\t": "\\t", "\r": "\\r" }

def data_path(*parts: str) -> str:
	return os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", *parts)

@dataclass
class SAtom():
	value: Union[str, int]
	kind: str = "symbol"
	line: int = field(default = 0, compare = False)
	col: int = field(default = 0, compare = False)

	@property
	def is_keyword(self) -> bool:
		return (self.kind == "symbol") and self.value.startswith(":") and (len(self.value) > 1)

	@property
	def is_variable(self) -> bool:
		return (self.kind == "symbol") and self.value.startswith("?") and (len(self.value) > 1)

	@property
	def is_label_ref(self) -> bool:
		return (self.kind == "symbol") and self.value.startswith("#") and (len(self.value) > 1)

	def flat(self) -> str:
		if self.kind == "string":
			return "\"%s\"" % ("".join(_STRING_ESCAPES.get(char, char) for char in self.value))
		return str(self.value)

	def __str__(self):
		return self.flat()

@dataclass
class SList():
	items: list
	line: int = field(default = 0, compare = False)
	col: int = field(default = 0, compare = False)

	@property
	def head(self) -> Optional[str]:
		if (len(self.items) > 0) and isinstance(self.items[0], SAtom):
			return self.items[0].value
		return None

	def split(self, start: int = 1) -> tuple[list, dict]:
		"""Separates positional arguments from ':keyword value' pairs."""
		positional = [ ]
		keywords = { }
		index = start
		while index < len(self.items):
			item = self.items[index]
			if isinstance(item, SAtom) and item.is_keyword and (index + 1 < len(self.items)):
				if item.value in keywords:
					raise CDXSyntaxError("Keyword %s given twice." % (item.value), item.line, item.col)
				keywords[item.value] = self.items[index + 1]
				index += 2
			else:
				positional.append(item)
				index += 1
		return (positional, keywords)

	def walk(self) -> Iterator[Union[SAtom, "SList"]]:
		yield self
		for item in self.items:
			if isinstance(item, SList):
				yield from item.walk()
			else:
				yield item

	def flat(self) -> str:
		return "(%s)" % (" ".join(item.flat() for item in self.items))

	def __str__(self):
		return self.flat()

def symbol(value: str) -> SAtom:
	return SAtom(value = value)

def slist(*items) -> SList:
	return SList(items = [ symbol(item) if isinstance(item, str) else item for item in items ])

def _positioned(constructor):
	def action(text, loc, tokens):
		return constructor(tokens, pyparsing.lineno(loc, text), pyparsing.col(loc, text))
	return action

def _build_grammar():
	sexp = pyparsing.Forward()
	lpar = pyparsing.Suppress("(")
	rpar = pyparsing.Suppress(")")
	string = pyparsing.QuotedString(quote_char = "\"", esc_char = "\\").set_parse_action(_positioned(lambda tokens, line, col: SAtom(value = tokens[0], kind = "string", line = line, col = col)))
	integer = pyparsing.Regex(r"-?\d+(?=[\s();]|$)").set_parse_action(_positioned(lambda tokens, line, col: SAtom(value = int(tokens[0]), kind = "int", line = line, col = col)))
	entity = pyparsing.Regex(r"[A-Za-z_][A-Za-z0-9_\-]*\([A-Za-z0-9_\-]+\)").set_parse_action(_positioned(lambda tokens, line, col: SAtom(value = tokens[0], line = line, col = col)))
	atom = pyparsing.Regex(r"[^\s()\";]+").set_parse_action(_positioned(lambda tokens, line, col: SAtom(value = tokens[0], line = line, col = col)))
	group = (lpar + pyparsing.Group(pyparsing.ZeroOrMore(sexp)) + rpar).set_parse_action(_positioned(lambda tokens, line, col: SList(items = list(tokens[0]), line = line, col = col)))
	sexp <<= string | integer | entity | atom | group
	document = pyparsing.ZeroOrMore(sexp) + pyparsing.StringEnd()
	document.ignore(pyparsing.Regex(r";[^\n]*"))
	return document

_GRAMMAR = _build_grammar()

def read_sexprs(text: str) -> list[Union[SAtom, SList]]:
	try:
		return list(_GRAMMAR.parse_string(text, parse_all = True))
	except pyparsing.ParseException as e:
		raise CDXSyntaxError(e.msg, e.lineno, e.col) from e

def check_symbols(node: Union[SAtom, SList]):
	"""Rejects :act and :state values that are neither known symbols nor variables."""
	if not isinstance(node, SList):
		return
	for item in node.walk():
		if not isinstance(item, SList):
			continue
		for (keyword, value) in zip(item.items, item.items[1:]):
			if (not isinstance(keyword, SAtom)) or (not isinstance(value, SAtom)) or value.is_variable:
				continue
			if (keyword.value == ":act") and (PrimitiveAct.lookup(value.value) is None):
				raise UnknownAct("Unknown primitive act '%s'." % (value.value), value.line, value.col)
			if (keyword.value == ":state") and (StateName.lookup(value.value) is None):
				raise UnknownState("Unknown state '%s'." % (value.value), value.line, value.col)

@dataclass(frozen=True)
class Diagnostic():
	code: str
	message: str
	line: int = 0
	col: int = 0

	def __str__(self):
		return "%d:%d: %s: %s" % (self.line, self.col, self.code, self.message)

@dataclass
class DocItem():
	kind: str
	ref: Optional[str] = None
	sexp: Optional[SList] = None
	line: int = 0
	col: int = 0

class CdxDocument():
	def __init__(self, store: Optional[CDStore] = None):
		self._items: list[DocItem] = [ ]
		self._store = store if (store is not None) else CDStore()
		self._problems: list[Diagnostic] = [ ]

	@property
	def items(self) -> list[DocItem]:
		return self._items

	@property
	def store(self) -> CDStore:
		return self._store

	@property
	def problems(self) -> list[Diagnostic]:
		return self._problems

	def sections(self, kind: str) -> list[SList]:
		return [ item.sexp for item in self._items if (item.kind == kind) ]

	def roots(self) -> list[str]:
		return [ item.ref for item in self._items if item.kind in ("cz", "link") ]

	def _signature(self, item: DocItem):
		if item.kind == "cz":
			return (item.kind, self._store.cz(item.ref).label, self._store.canonicalize(item.ref))
		elif item.kind == "link":
			return (item.kind, self._store.canonicalize(item.ref))
		elif item.kind == "anchor":
			anchor = [ anchor for anchor in self._store.anchors if anchor.anchor_id == item.ref ][0]
			return (item.kind, anchor.anchor_id, anchor.uri, anchor.symbol)
		elif item.kind == "entity":
			entity = EntityRef.parse(item.ref)
			return (item.kind, item.ref, self._store.intern(entity).anchor)
		elif item.kind == "elab":
			elaboration = self._store.elaborations[item.ref]
			return (item.kind, item.ref, tuple(self._store.canonicalize(step) for step in elaboration.script))
		return (item.kind, item.sexp)

	def structurally_equal(self, other: "CdxDocument") -> bool:
		if len(self._items) != len(other.items):
			return False
		return all(self._signature(mine) == other._signature(theirs) for (mine, theirs) in zip(self._items, other.items))

	def __str__(self):
		return "CdxDocument<%d items, %s>" % (len(self._items), self._store)

class _DocumentBuilder():
	def __init__(self, strict: bool, store: Optional[CDStore] = None):
		self._strict = strict
		self._doc = CdxDocument(store)

	@property
	def store(self) -> CDStore:
		return self._doc.store

	def _expect_symbol(self, node, what: str, context: SList) -> SAtom:
		if not isinstance(node, SAtom):
			position = context if (node is None) else node
			raise CDXSyntaxError("Expected %s." % (what), position.line, position.col)
		return node

	def _entity(self, node, context: SList) -> EntityRef:
		atom = self._expect_symbol(node, "an entity", context)
		if (atom.kind != "symbol") or (not EntityRef.is_entity_symbol(atom.value)):
			raise CDXSyntaxError("'%s' is not an entity symbol." % (atom.flat()), atom.line, atom.col)
		return EntityRef.parse(atom.value)

	def _state(self, node, context: SList) -> StateName:
		atom = self._expect_symbol(node, "a state", context)
		state = StateName.lookup(atom.value)
		if state is None:
			raise UnknownState("Unknown state '%s'." % (atom.value), atom.line, atom.col)
		return state

	def _mods(self, node, context: SList) -> list[Modifier]:
		if not isinstance(node, SList):
			position = context if (node is None) else node
			raise CDXSyntaxError("Modifiers must be a list.", position.line, position.col)
		mods = [ ]
		for atom in node.items:
			mod = Modifier.lookup(atom.value) if isinstance(atom, SAtom) else None
			if mod is None:
				raise CDXSyntaxError("Unknown modifier %s." % (atom.flat()), atom.line, atom.col)
			mods.append(mod)
		return mods

	def _label_ref(self, atom: SAtom) -> str:
		try:
			return self.store.resolve_label(atom.value[1:])
		except DanglingRef as e:
			raise DanglingLabelRef("Reference to undefined label %s." % (atom.value), atom.line, atom.col) from e

	def _node(self, node) -> str:
		if isinstance(node, SAtom):
			if node.is_label_ref:
				return self._label_ref(node)
			raise CDXSyntaxError("Expected a conceptualization, link or #label, got '%s'." % (node.flat()), node.line, node.col)
		if node.head == "cz":
			return self._cz(node)
		if LinkKind.lookup(node.head) is not None:
			return self._link(node)
		raise CDXSyntaxError("Unexpected form '%s'." % (node.head), node.line, node.col)

	def _cz(self, form: SList) -> str:
		(positional, keywords) = form.split()
		if len(positional) > 0:
			raise CDXSyntaxError("Unexpected argument %s in conceptualization." % (positional[0].flat()), positional[0].line, positional[0].col)
		unknown = set(keywords) - set([ ":actor", ":act", ":state", ":mods", ":label" ]) - set(_KEYWORD_ROLES)
		if len(unknown) > 0:
			keyword = sorted(unknown)[0]
			raise CDXSyntaxError("Unknown keyword %s." % (keyword), form.line, form.col)

		actor = self._entity(keywords.get(":actor"), form)
		act_atom = self._expect_symbol(keywords.get(":act"), "an :act", form)
		act = PrimitiveAct.lookup(act_atom.value)
		if act is None:
			raise UnknownAct("Unknown primitive act '%s'." % (act_atom.value), act_atom.line, act_atom.col)

		roles = { }
		for (keyword, role) in _KEYWORD_ROLES.items():
			if keyword not in keywords:
				continue
			value = keywords[keyword]
			if (role == "obj") and (isinstance(value, SList) or value.is_label_ref):
				roles[role] = self._node(value)
			else:
				roles[role] = self._entity(value, form)
		state = self._state(keywords[":state"], form) if (":state" in keywords) else None
		mods = self._mods(keywords[":mods"], form) if (":mods" in keywords) else [ ]
		label = str(keywords[":label"].value) if (":label" in keywords) else None

		if (label is not None) and (label in self.store.labels):
			message = "Label '%s' is already defined." % (label)
			if self._strict:
				raise CDXSyntaxError(message, form.line, form.col)
			self._doc.problems.append(Diagnostic("duplicate-label", message, form.line, form.col))
			label = None
		try:
			return self.store.assert_cz(actor = actor, act = act, state = state, mods = mods, label = label, **roles)
		except CDPlusError as e:
			raise CDXSyntaxError("[%s] %s" % (e.__class__.__name__, e), form.line, form.col) from e

	def _link(self, form: SList) -> str:
		kind = LinkKind.lookup(form.head)
		(positional, keywords) = form.split()
		mods = self._mods(keywords[":mods"], form) if (":mods" in keywords) else [ ]
		if kind == LinkKind.StateAttr:
			if len(positional) != 3:
				raise CDXSyntaxError("state-attr takes an entity, a state and a conceptualization.", form.line, form.col)
			endpoints = (self._entity(positional[0], form), self._state(positional[1], form), self._node(positional[2]))
		else:
			if len(positional) != 2:
				raise CDXSyntaxError("%s link takes exactly two endpoints." % (kind.value), form.line, form.col)
			endpoints = (self._node(positional[0]), self._node(positional[1]))
		try:
			return self.store.add_link(kind, endpoints, mods = mods)
		except CDPlusError as e:
			raise CDXSyntaxError("[%s] %s" % (e.__class__.__name__, e), form.line, form.col) from e

	def _anchor(self, form: SList) -> str:
		(positional, keywords) = form.split()
		if len(positional) != 1:
			raise CDXSyntaxError("anchor takes exactly one identifier.", form.line, form.col)
		anchor_id = str(self._expect_symbol(positional[0], "an anchor id", form).value)
		uri = keywords[":uri"].value if (":uri" in keywords) else None
		symbol = keywords[":for"].value if (":for" in keywords) else None
		try:
			self.store.add_anchor(anchor_id, uri = uri, symbol = symbol)
		except LabelClash as e:
			raise CDXSyntaxError(str(e), form.line, form.col) from e
		return anchor_id

	def _entity_decl(self, form: SList) -> str:
		(positional, keywords) = form.split()
		if len(positional) != 1:
			raise CDXSyntaxError("entity takes exactly one symbol.", form.line, form.col)
		entity = self._entity(positional[0], form)
		anchor = keywords[":anchor"].value if (":anchor" in keywords) else None
		self.store.entity(entity.name, entity.param, anchor = anchor)
		return str(entity)

	def _elab(self, form: SList) -> str:
		(positional, keywords) = form.split()
		if len(positional) < 2:
			raise CDXSyntaxError("elab takes a symbol and at least one script step.", form.line, form.col)
		symbol = str(self._expect_symbol(positional[0], "a symbol", form).value)
		script = [ self._node(step) for step in positional[1:] ]
		try:
			self.store.add_elaboration(symbol, script)
		except CDPlusError as e:
			raise CDXSyntaxError("[%s] %s" % (e.__class__.__name__, e), form.line, form.col) from e
		return symbol

	def add(self, form):
		if not isinstance(form, SList) or (form.head is None):
			raise CDXSyntaxError("Expected a top-level form.", form.line, form.col)
		head = form.head
		if head in RAW_SECTIONS:
			check_symbols(form)
			item = DocItem(kind = head, sexp = form)
		elif head == "cz":
			item = DocItem(kind = "cz", ref = self._cz(form))
		elif LinkKind.lookup(head) is not None:
			item = DocItem(kind = "link", ref = self._link(form))
		elif head == "anchor":
			item = DocItem(kind = "anchor", ref = self._anchor(form))
		elif head == "entity":
			item = DocItem(kind = "entity", ref = self._entity_decl(form))
		elif head == "elab":
			item = DocItem(kind = "elab", ref = self._elab(form))
		else:
			raise CDXSyntaxError("Unknown top-level form '%s'." % (head), form.line, form.col)
		item.line = form.line
		item.col = form.col
		self._doc.items.append(item)

	def build(self, forms: list) -> CdxDocument:
		for form in forms:
			try:
				self.add(form)
			except DanglingLabelRef as e:
				if self._strict:
					raise
				self._doc.problems.append(Diagnostic("dangling-ref", e.msg, e.line, e.col))
		return self._doc

def parse(text: str, strict: bool = True) -> CdxDocument:
	return _DocumentBuilder(strict = strict).build(read_sexprs(text))

def parse_file(filename: str, strict: bool = True) -> CdxDocument:
	with open(filename, encoding = "utf-8") as f:
		return parse(f.read(), strict = strict)

def build_node(store: CDStore, form: Union[SAtom, SList]) -> str:
	"""Asserts one cz or link form (as found inside raw sections) into an existing store."""
	return _DocumentBuilder(strict = True, store = store)._node(form)

class _Serializer():
	def __init__(self, doc: CdxDocument):
		self._doc = doc
		self._store = doc.store
		self._emitted = set()

	def _node(self, node_id: str):
		if self._store.is_link(node_id):
			return self._link(node_id)
		cz = self._store.cz(node_id)
		if (cz.label is not None) and (cz.label in self._emitted):
			return symbol("#%s" % (cz.label))
		return self._cz(node_id)

	def _mods(self, mods) -> SList:
		return slist(*[ mod.value for mod in Modifier.ordered(mods) ])

	def _cz(self, cz_id: str) -> SList:
		cz = self._store.cz(cz_id)
		form = slist("cz", ":actor", str(cz.actor), ":act", cz.act.value)
		for role in ROLES:
			value = cz.role(role)
			if value is None:
				continue
			form.items.append(symbol(ROLE_KEYWORDS[role]))
			form.items.append(self._node(value) if isinstance(value, str) else symbol(str(value)))
		if cz.state is not None:
			form.items += [ symbol(":state"), symbol(str(cz.state)) ]
		if len(cz.mods) > 0:
			form.items += [ symbol(":mods"), self._mods(cz.mods) ]
		if cz.label is not None:
			form.items += [ symbol(":label"), symbol(cz.label) ]
			self._emitted.add(cz.label)
		return form

	def _link(self, link_id: str) -> SList:
		link = self._store.link(link_id)
		if link.kind == LinkKind.StateAttr:
			form = slist(link.kind.value, str(link.entity), str(link.state), self._node(link.target))
		else:
			form = slist(link.kind.value, self._node(link.source), self._node(link.target))
		if len(link.mods) > 0:
			form.items += [ symbol(":mods"), self._mods(link.mods) ]
		return form

	def _item(self, item: DocItem) -> SList:
		if item.kind in ("cz", "link"):
			return self._node(item.ref)
		elif item.kind == "anchor":
			anchor = [ anchor for anchor in self._store.anchors if anchor.anchor_id == item.ref ][0]
			form = slist("anchor", anchor.anchor_id)
			if anchor.uri is not None:
				form.items += [ symbol(":uri"), SAtom(value = anchor.uri, kind = "string") ]
			if anchor.symbol is not None:
				form.items += [ symbol(":for"), symbol(anchor.symbol) ]
			return form
		elif item.kind == "entity":
			entity = self._store.intern(EntityRef.parse(item.ref))
			form = slist("entity", str(entity))
			if entity.anchor is not None:
				form.items += [ symbol(":anchor"), symbol(entity.anchor) ]
			return form
		elif item.kind == "elab":
			elaboration = self._store.elaborations[item.ref]
			return slist("elab", item.ref, *[ self._node(step) for step in elaboration.script ])
		return item.sexp

	def serialize(self) -> str:
		return "".join(layout(self._item(item)) + "\n" for item in self._doc.items)

def layout(node: Union[SAtom, SList], indent: int = 0) -> str:
	"""Pretty-prints a form: on one line if it fits, otherwise one keyword pair per indented line."""
	flat = node.flat()
	if isinstance(node, SAtom) or (indent + len(flat) <= LINE_WIDTH):
		return flat
	items = list(node.items)
	head = [ ]
	while (len(items) > 0) and isinstance(items[0], SAtom) and (not items[0].is_keyword):
		head.append(items.pop(0).flat())
	inner = indent + 2
	lines = [ "(" + " ".join(head) ]
	while len(items) > 0:
		item = items.pop(0)
		if isinstance(item, SAtom) and item.is_keyword and (len(items) > 0):
			value = items.pop(0)
			lines.append(" " * inner + item.flat() + " " + layout(value, inner + len(item.flat()) + 1))
		else:
			lines.append(" " * inner + layout(item, inner))
	return "\n".join(lines) + ")"

def serialize(doc: CdxDocument) -> str:
	return _Serializer(doc).serialize()

def validate(doc: CdxDocument) -> list[Diagnostic]:
	diagnostics = list(doc.problems)
	reported = set()
	for item in doc.items:
		if item.kind not in ("cz", "link"):
			continue
		try:
			ungrounded = doc.store.ground_check(item.ref)
		except ElaborationCycle as e:
			diagnostics.append(Diagnostic("elaboration-cycle", str(e), item.line, item.col))
			continue
		for name in ungrounded:
			if name in reported:
				continue
			reported.add(name)
			diagnostics.append(Diagnostic("ungrounded-symbol", "'%s' has neither a structure anchor nor an elaboration." % (name), item.line, item.col))
	if len(diagnostics) > 0:
		_log.debug("Document has %d diagnostic(s).", len(diagnostics))
	return diagnostics
