"""Goal-oriented healthy-eating chat service.

Food and water logging over a fuzzy-searchable food knowledge graph, dietary
goal tracking with just-in-time notification prompts, and rule-based meal
recommendations, served over a small HTTP/WebSocket API.
"""

__version__ = "0.1.0"
