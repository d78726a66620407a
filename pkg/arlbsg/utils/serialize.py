'''
    Stores and restores objects in pickle form.

    The chain runner persists its last ChainState with it so that a run
    can be continued with `fit --resume`.
'''
import re
from pathlib import Path

# dill pickles the generator state along with the arrays
import dill


class Serializer(object):
    '''Loading and dumping through dill'''

    @classmethod
    def load(cls, file_path):
        '''Recovers a new serialized object from disk'''
        file_path = Path(file_path)
        if file_path.suffix != '.pickle':
            file_path = file_path.with_suffix('.pickle')

        with file_path.open('rb') as f:
            serialized_instance = dill.load(f)

        if not isinstance(serialized_instance, cls):
            raise TypeError(
                f'{file_path} holds a {type(serialized_instance).__name__} '
                f'expected {cls.__name__}')
        return serialized_instance

    def dump(self, file_dir, filename=None):
        '''Serializes thru pickle, returns the target path'''
        if filename is None:
            filename = convert(self.__class__.__name__)

        if not filename.endswith('.pickle'):
            filename += '.pickle'

        file_path = Path(file_dir) / filename
        with file_path.open('wb') as f:
            dill.dump(self, f, protocol=dill.HIGHEST_PROTOCOL)
        return file_path


def convert(name):
    s1 = re.sub('(.)([A-Z][a-z]+)', r'\1_\2', name)
    return re.sub('([a-z0-9])([A-Z])', r'\1_\2', s1).lower()
