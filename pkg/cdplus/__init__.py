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

from .Exceptions import CDPlusError, GraphError, CDXError, MatchError, RuleError, SurfaceError, AgentError, WorldError, DialogueError, ScenarioInvalid, NoProvenance
from .Concepts import PrimitiveAct, StateName, Modifier, LinkKind, Attitude, Illocution, Tone, Sort, EventKind
from .CDGraph import CDStore, EntityRef, StructureAnchor
from .CDXFormat import CdxDocument, parse, parse_file, serialize, validate, data_path
from .Matcher import Pattern, Bindings, unify, find_all, substitute
from .Rules import Rulebase, load_rulebase, fire_cycle
from .World import WorldState, PhysicalCore, Action, Plan, Failure, plan, execute, observe
from .Surface import TemplateSet
from .Trace import Trace, Event, CausalChain
from .Agent import Agent, Message, StepResult
from .Dialogue import Scenario, DialogueRunner, Perturbation, run, why
