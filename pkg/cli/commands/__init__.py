"""
Subcommands of the hyperfoil CLI
"""
