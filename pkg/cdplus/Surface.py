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

import re
import logging
from dataclasses import dataclass
from typing import Optional
from .CDGraph import CDStore, EntityRef
from .CDXFormat import CdxDocument, SList, parse_file, data_path
from .Concepts import Illocution, Tone, Sort
from .Matcher import Pattern, unify, substitute
from .Exceptions import SurfaceError, NoTemplate, AmbiguousTemplate, Unrecognized, CDPlusError

_log = logging.getLogger(__name__)

_SLOT_RE = re.compile(r"\{(?P<slot>[a-z]+)\}")
_CONTEXT_SLOTS = ("speaker", "addressee")
_QUOTES = str.maketrans({ "‘": "'", "’": "'", "“": "\"", "”": "\"" })

def normalize(text: str) -> str:
	return " ".join(text.translate(_QUOTES).split())

@dataclass(frozen=True)
class Realization():
	text: str
	template_id: str
	illocution: Illocution

@dataclass(frozen=True)
class Recognition():
	cz_id: str
	illocution: Illocution
	template_id: str

class Template():
	def __init__(self, template_id: str, pattern: Pattern, text: str, illocution: Illocution, tone: Optional[Tone] = None):
		self._template_id = template_id
		self._pattern = pattern
		self._text = text
		self._illocution = illocution
		self._tone = tone
		self._slots = [ match["slot"] for match in _SLOT_RE.finditer(text) ]
		missing = set(pattern.variables) - set(self._slots) - set(_CONTEXT_SLOTS)
		if len(missing) > 0:
			raise SurfaceError("Template %s cannot recover %s from its text." % (template_id, ", ".join(sorted(missing))))
		for slot in self._slots:
			if pattern.variables.get(slot) != Sort.Entity:
				raise SurfaceError("Template %s slot {%s} is not an entity variable of its pattern." % (template_id, slot))
		regex = ""
		position = 0
		seen = set()
		for match in _SLOT_RE.finditer(text):
			regex += re.escape(text[position : match.start()])
			if match["slot"] in seen:
				regex += "(?P=%s)" % (match["slot"])
			else:
				regex += "(?P<%s>.+?)" % (match["slot"])
				seen.add(match["slot"])
			position = match.end()
		regex += re.escape(text[position:])
		self._regex = re.compile(regex)

	@property
	def template_id(self) -> str:
		return self._template_id

	@property
	def pattern(self) -> Pattern:
		return self._pattern

	@property
	def text(self) -> str:
		return self._text

	@property
	def illocution(self) -> Illocution:
		return self._illocution

	@property
	def tone(self) -> Optional[Tone]:
		return self._tone

	@property
	def regex(self):
		return self._regex

	def applies_to(self, tone: Tone) -> bool:
		return (self._tone is None) or (self._tone == tone)

	def __str__(self):
		return "Template<%s, %s>" % (self._template_id, self._illocution.value)

class TemplateSet():
	def __init__(self, templates: list[Template], lexemes: Optional[dict[str, str]] = None):
		self._templates = templates
		self._lexemes = dict(lexemes or { })
		self._phrases = { phrase: symbol for (symbol, phrase) in self._lexemes.items() }
		ids = [ template.template_id for template in templates ]
		if len(ids) != len(set(ids)):
			raise SurfaceError("Duplicate template id in template set.")

	@classmethod
	def from_document(cls, doc: CdxDocument) -> "TemplateSet":
		lexemes = { }
		for form in doc.sections("lexeme"):
			if (len(form.items) != 3) or (form.items[2].kind != "string"):
				raise SurfaceError("%d:%d: A lexeme maps one symbol to one quoted phrase." % (form.line, form.col))
			lexemes[str(form.items[1].value)] = form.items[2].value
		templates = [ cls._read_template(form) for form in doc.sections("template") ]
		return cls(templates, lexemes)

	@classmethod
	def _read_template(cls, form: SList) -> Template:
		(positional, keywords) = form.split()
		if (len(positional) != 1) or any(keyword not in keywords for keyword in (":illocution", ":pattern", ":text")):
			raise SurfaceError("%d:%d: A template needs an id, :illocution, :pattern and :text." % (form.line, form.col))
		text = keywords[":text"].value
		illocution = Illocution.lookup(keywords[":illocution"].value)
		if illocution is None:
			raise SurfaceError("%d:%d: Unknown illocution %s." % (form.line, form.col, keywords[":illocution"].flat()))
		tone = None
		if ":tone" in keywords:
			tone = Tone.lookup(keywords[":tone"].value)
			if tone is None:
				raise SurfaceError("%d:%d: Unknown tone %s." % (form.line, form.col, keywords[":tone"].flat()))
		sorts = { name: Sort.Entity for name in list(_CONTEXT_SLOTS) + [ match["slot"] for match in _SLOT_RE.finditer(text) ] }
		try:
			pattern = Pattern.from_sexpr(keywords[":pattern"], sorts = sorts)
		except CDPlusError as e:
			raise SurfaceError("Template %s: %s" % (positional[0].flat(), e)) from e
		return Template(str(positional[0].value), pattern, text, illocution, tone)

	@classmethod
	def from_file(cls, filename: str) -> "TemplateSet":
		return cls.from_document(parse_file(filename))

	@classmethod
	def default(cls) -> "TemplateSet":
		return cls.from_file(data_path("surface", "templates.cdx"))

	@property
	def templates(self) -> list[Template]:
		return list(self._templates)

	def template(self, template_id: str) -> Template:
		for template in self._templates:
			if template.template_id == template_id:
				return template
		raise NoTemplate("No template with id %s." % (template_id))

	def phrase(self, entity: EntityRef) -> str:
		return self._lexemes.get(str(entity), str(entity))

	def entity_for(self, phrase: str) -> Optional[EntityRef]:
		if phrase in self._phrases:
			return EntityRef.parse(self._phrases[phrase])
		if EntityRef.is_entity_symbol(phrase):
			return EntityRef.parse(phrase)
		return None

	def realize(self, store: CDStore, cz_id: str, tone: Tone, speaker: EntityRef, addressee: EntityRef) -> Realization:
		context = { "speaker": speaker, "addressee": addressee }
		matches = [ ]
		for template in self._templates:
			if not template.applies_to(tone):
				continue
			bindings = unify(template.pattern, store, cz_id, { name: value for (name, value) in context.items() if name in template.pattern.variables })
			if bindings is not None:
				matches.append((template, bindings))
		if len(matches) == 0:
			raise NoTemplate("No %s template for %s." % (tone.value, store.canonicalize(cz_id)))
		if len(matches) > 1:
			raise AmbiguousTemplate("%s matches templates %s." % (store.canonicalize(cz_id), ", ".join(template.template_id for (template, _) in matches)))
		(template, bindings) = matches[0]
		text = _SLOT_RE.sub(lambda match: self.phrase(bindings[match["slot"]]), template.text)
		return Realization(text = text, template_id = template.template_id, illocution = template.illocution)

	def recognize(self, text: str, store: CDStore, speaker: EntityRef, addressee: EntityRef) -> Recognition:
		text = normalize(text)
		candidates = [ ]
		for template in self._templates:
			match = template.regex.fullmatch(text)
			if match is None:
				continue
			bindings = { "speaker": speaker, "addressee": addressee }
			for (slot, phrase) in match.groupdict().items():
				entity = self.entity_for(phrase)
				if (entity is None) or ((slot in bindings) and (bindings[slot] != entity)):
					break
				bindings[slot] = entity
			else:
				candidates.append((template, bindings))
		if len(candidates) == 0:
			raise Unrecognized("No template matches \"%s\"." % (text))
		if len(candidates) > 1:
			raise AmbiguousTemplate("\"%s\" matches templates %s." % (text, ", ".join(template.template_id for (template, _) in candidates)))
		(template, bindings) = candidates[0]
		cz_id = substitute(template.pattern, bindings, store)
		return Recognition(cz_id = cz_id, illocution = template.illocution, template_id = template.template_id)
