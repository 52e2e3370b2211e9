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

import enum
from typing import Iterable
from .Exceptions import ModifierConflict

class _SymbolEnum(enum.Enum):
	@classmethod
	def lookup(cls, name: str):
		for member in cls:
			if member.value == name:
				return member
		return None

	@classmethod
	def names(cls) -> list[str]:
		return [ member.value for member in cls ]

	def __str__(self):
		return self.value

class PrimitiveAct(_SymbolEnum):
	PTRANS = "PTRANS"
	MTRANS = "MTRANS"
	MBUILD = "MBUILD"
	CONCP = "CONCP"
	WANT = "WANT"
	SAY = "SAY"
	ANTICIPATE = "ANTICIPATE"
	PUSH = "PUSH"
	BE = "BE"

# Acts whose object is itself conceptual content, never a bare entity
CONCEPTUAL_ACTS = frozenset([ PrimitiveAct.WANT, PrimitiveAct.CONCP, PrimitiveAct.ANTICIPATE ])

class StateName(_SymbolEnum):
	Open = "Open"
	Pleased = "Pleased"
	Displeased = "Displeased"
	ANTICIPATION = "ANTICIPATION"
	HOPE = "HOPE"
	FRUSTRATED = "FRUSTRATED"
	FEAR = "FEAR"
	DISAPPOINTED = "DISAPPOINTED"
	RELIEVED = "RELIEVED"

class Modifier(_SymbolEnum):
	c = "c"
	f = "f"
	can = "can"
	neg = "neg"
	qwhy = "qwhy"
	past = "past"

	@classmethod
	def ordered(cls, mods: Iterable["Modifier"]) -> list["Modifier"]:
		mods = set(mods)
		return [ member for member in cls if member in mods ]

	@classmethod
	def check(cls, mods: Iterable["Modifier"]) -> frozenset:
		mods = frozenset(mods)
		if (cls.f in mods) and (cls.past in mods):
			raise ModifierConflict("Modifiers 'f' and 'past' are mutually exclusive.")
		return mods

class LinkKind(_SymbolEnum):
	Causal = "causal"
	Temporal = "temporal"
	StateAttr = "state-attr"

class Attitude(_SymbolEnum):
	SERVILE = "SERVILE"
	ALTRUISTIC = "ALTRUISTIC"
	COOPERATIVE = "COOPERATIVE"
	REBELLIOUS = "REBELLIOUS"
	UNCOOPERATIVE = "UNCOOPERATIVE"

class Illocution(_SymbolEnum):
	Directive = "directive"
	Inform = "inform"
	WhyQuestion = "why-question"
	Answer = "answer"

class Tone(_SymbolEnum):
	Neutral = "neutral"
	Polite = "polite"

class Sort(_SymbolEnum):
	Entity = "entity"
	Cz = "cz"
	State = "state"

class EventKind(_SymbolEnum):
	Motivation = "motivation"
	Heard = "heard"
	Intent = "intent"
	Utterance = "utterance"
	Assertion = "assertion"
	AffectOnset = "affect-onset"
	AffectOffset = "affect-offset"
	RuleFiring = "rule-firing"
	PlanResult = "plan-result"
	WorldEvent = "world-event"
	Prediction = "prediction"
	ProspUpdate = "prosp-update"
	CauseRecorded = "cause-recorded"
	WantStatus = "want-status"
	Perturbation = "perturbation"
