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

class CDPlusError(Exception): pass

class GraphError(CDPlusError): pass
class DanglingRef(GraphError): pass
class LabelClash(GraphError): pass
class BadObject(GraphError): pass
class ModifierConflict(GraphError): pass
class SelfCause(GraphError): pass
class TemporalCycle(GraphError): pass
class ElaborationCycle(GraphError): pass

class CDXError(CDPlusError):
	def __init__(self, msg: str, line: int = 0, col: int = 0):
		CDPlusError.__init__(self, "%d:%d: %s" % (line, col, msg))
		self.msg = msg
		self.line = line
		self.col = col

class CDXSyntaxError(CDXError): pass
class UnknownAct(CDXError): pass
class UnknownState(CDXError): pass
class DanglingLabelRef(CDXError): pass

class MatchError(CDPlusError): pass
class SortMismatch(MatchError): pass
class UnboundVariable(MatchError): pass

class RuleError(CDPlusError): pass
class DuplicateRuleName(RuleError): pass
class UnboundEffectVariable(RuleError): pass
class RuleSyntaxError(RuleError): pass

class SurfaceError(CDPlusError): pass
class NoTemplate(SurfaceError): pass
class AmbiguousTemplate(SurfaceError): pass
class Unrecognized(SurfaceError): pass

class AgentError(CDPlusError): pass
class NoModel(AgentError): pass

class WorldError(CDPlusError): pass
class MalformedGoal(WorldError): pass
class PreconditionViolated(WorldError): pass

class DialogueError(CDPlusError): pass
class ScenarioInvalid(DialogueError): pass
class NoProvenance(DialogueError): pass
