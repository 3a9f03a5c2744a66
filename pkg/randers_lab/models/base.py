class Base:
    """
    Value object compared and printed through the fields named in ``_fields``.
    """
    _fields = ()

    @property
    def id(self):
        return tuple(_freeze(getattr(self, name)) for name in self._fields)

    def as_dict(self):
        return {name: getattr(self, name) for name in self._fields}

    def __repr__(self):
        parts = ', '.join('{}={!r}'.format(name, getattr(self, name)) for name in self._fields)
        return '({} {})'.format(self.__class__.__name__, parts)

    def __eq__(self, other):
        return type(self) is type(other) and self.id == other.id

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.__class__.__name__, self.id))


def _freeze(value):
    if isinstance(value, dict):
        return tuple(sorted((key, _freeze(item)) for key, item in value.items()))
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(item) for item in value)
    if hasattr(value, 'tolist'):
        return _freeze(value.tolist())
    return value
