class PartitionerException(Exception):
    pass

class MalformedHypergraph(PartitionerException):
    '''An exception which is raised when a hypergraph
    breaks one of its structural invariants (duplicate pins,
    out of range ids, non-positive weights or sizes).
    '''
    pass

class HypergraphFormatError(PartitionerException):
    '''An exception which is raised when a hypergraph or
    partition file cannot be parsed. Carries the offending
    path and the 1-based line number when one is known.
    '''
    def __init__(self, message, path=None, line=None):
        location = ''
        if path is not None:
            location = f'{path}'
            if line is not None:
                location += f':{line}'
            location += ': '
        super().__init__(f'{location}{message}')
        self.path = path
        self.line = line

class InfeasibleInstance(PartitionerException):
    '''An exception which is raised when no valid partitioning
    can exist for the given constraints, e.g. a single node
    already exceeds the size or inbound limit on its own.
    '''
    pass

class ConfigurationError(PartitionerException, ValueError):
    pass

class ProposalStructureError(PartitionerException):
    '''An exception which is raised when a proposal graph contains
    a directed cycle longer than two. This can only happen if the
    candidate proposal broke its tie-breaking rule.
    '''
    pass

class LedgerMismatch(PartitionerException):
    '''An exception which is raised by debug checks when the
    incrementally maintained partition ledgers disagree with a
    recomputation from scratch.
    '''
    pass

class OracleLimitExceeded(PartitionerException):
    pass
